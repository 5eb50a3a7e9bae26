#pragma once

#include <json.hpp>
#include <string>

#include "racbem/chebyshev.hpp"
#include "racbem/circuit.hpp"
#include "racbem/noise.hpp"
#include "racbem/phase_factors.hpp"
#include "racbem/statevector.hpp"

namespace racbem {

using Json = nlohmann::ordered_json;

Json to_json(const CouplingMap& m);
CouplingMap coupling_from_json(const Json& j);

Json to_json(const QuantumCircuit& c);
QuantumCircuit circuit_from_json(const Json& j);

Json to_json(const CountsHistogram& h);
CountsHistogram counts_from_json(const Json& j);

Json to_json(const ChebPoly& p);
ChebPoly poly_from_json(const Json& j);

Json to_json(const PhaseFactors& p);
PhaseFactors phases_from_json(const Json& j);

/// {"schema": 1, "gate_errors": [{kind, qubits, probs}], "readout": [{qubit, matrix}]}
Json to_json(const NoiseModel& m);
NoiseModel noise_from_json(const Json& j);

/// Interleaved re/im, row-major.
Json to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json parse_json(const std::string& text);
std::string read_file(const std::string& path);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace racbem
