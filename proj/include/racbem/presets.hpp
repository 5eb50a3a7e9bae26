#pragma once

#include <array>

// Reference parameter sets: phase-factor lengths, approximation errors and
// scaling factors for each experiment.

namespace racbem::presets {

struct QlspRow {
  double kappa;
  int length;
  double error;
  double scale;
  bool hardware;  // true for the 5-qubit device runs
};

inline constexpr std::array<QlspRow, 6> kQlsp = {{
    {2, 3, 2.79722e-02, 3.59306, true},
    {2, 11, 2.44481e-05, 3.59306, true},
    {2, 5, 6.18245e-03, 2.38234, false},
    {5, 7, 1.90152e-02, 5.86631, false},
    {10, 13, 7.45462e-03, 11.89390, false},
    {20, 19, 6.65999e-03, 23.81003, false},
}};

struct SeriesPart {
  double eta;
  int length;
  double error;
  double scale;
};

struct TimeSeriesRow {
  double t;
  SeriesPart re;
  SeriesPart im;
};

inline constexpr std::array<TimeSeriesRow, 10> kTimeSeries = {{
    {1, {1.0, 3, 1.23670e-02, 1.21807}, {1.0, 3, 1.14646e-02, 1.16750}},
    {2, {1.0, 3, 4.25711e-02, 1.26458}, {1.0, 3, 4.73088e-02, 1.24295}},
    {3, {1.0, 5, 9.64293e-03, 1.21400}, {1.0, 5, 1.60676e-03, 1.19769}},
    {4, {1.5, 7, 8.48770e-03, 1.34011}, {1.0, 5, 8.83397e-03, 1.18742}},
    {5, {2.0, 7, 2.66925e-02, 1.51827}, {1.5, 5, 7.76900e-02, 1.23512}},
    {6, {1.5, 9, 2.10169e-02, 1.35177}, {1.5, 7, 3.15931e-02, 1.36811}},
    {7, {1.5, 9, 3.47455e-02, 1.39998}, {1.5, 7, 6.47625e-02, 1.35109}},
    {8, {1.5, 9, 5.78363e-02, 1.44148}, {1.5, 9, 5.50680e-02, 1.43342}},
    {9, {1.5, 11, 2.84139e-02, 1.37467}, {1.5, 9, 5.73218e-02, 1.40154}},
    {10, {1.5, 11, 3.26549e-02, 1.38139}, {1.5, 11, 6.46945e-02, 1.41058}},
}};

inline constexpr std::array<TimeSeriesRow, 10> kTimeSeriesLong = {{
    {1, {1.0, 5, 1.35882e-04, 1.20020}, {1.0, 5, 2.88576e-04, 1.15186}},
    {2, {1.0, 5, 2.07363e-03, 1.20298}, {1.0, 5, 1.25689e-03, 1.19857}},
    {3, {1.0, 7, 9.83304e-04, 1.19894}, {1.0, 5, 1.60676e-03, 1.19769}},
    {4, {2.0, 9, 4.56577e-03, 1.46804}, {1.0, 7, 4.05038e-03, 1.19621}},
    {5, {2.0, 11, 3.37127e-03, 1.46510}, {1.5, 9, 3.23071e-03, 1.34575}},
    {6, {2.0, 13, 3.17200e-03, 1.47531}, {2.0, 11, 6.19908e-03, 1.48017}},
    {7, {2.5, 13, 4.32981e-03, 1.58693}, {3.0, 13, 3.50032e-03, 1.70412}},
    {8, {2.0, 15, 4.40561e-03, 1.47748}, {3.0, 15, 2.35584e-03, 1.70038}},
    {9, {2.0, 17, 5.14176e-03, 1.47880}, {4.0, 15, 3.59205e-03, 1.90551}},
    {10, {2.5, 17, 5.05998e-03, 1.59715}, {3.0, 17, 3.53947e-03, 1.70218}},
}};

struct SpectralRow {
  double energy;
  int length;
  double error;
  double scale;
};

inline constexpr std::array<SpectralRow, 11> kSpectral = {{
    {0.0, 11, 3.20242e-02, 2.14095}, {0.1, 11, 5.59268e-02, 2.14095},
    {0.2, 11, 1.23926e-01, 2.14095}, {0.3, 11, 1.32550e-01, 2.14095},
    {0.4, 11, 1.36737e-01, 2.14095}, {0.5, 11, 1.71503e-01, 2.14095},
    {0.6, 11, 1.36727e-01, 2.14095}, {0.7, 11, 1.32529e-01, 2.14095},
    {0.8, 11, 1.23922e-01, 2.14095}, {0.9, 11, 5.59258e-02, 2.14095},
    {1.0, 11, 3.20242e-02, 2.14095},
}};

inline constexpr std::array<SpectralRow, 11> kSpectralLong = {{
    {0.0, 21, 9.59006e-04, 2.14095}, {0.1, 27, 5.02000e-03, 2.14095},
    {0.2, 33, 5.48205e-03, 2.14095}, {0.3, 37, 5.90586e-03, 2.14095},
    {0.4, 41, 4.66722e-03, 2.14095}, {0.5, 43, 4.38167e-03, 2.14095},
    {0.6, 41, 4.66727e-03, 2.14095}, {0.7, 39, 3.70179e-03, 2.14095},
    {0.8, 35, 3.29638e-03, 2.14095}, {0.9, 27, 5.01941e-03, 2.14095},
    {1.0, 19, 2.53240e-03, 2.14095},
}};

struct ThermalRow {
  double beta;
  int num_length;
  double num_error;
  double num_scale;
  int den_length;
  double den_error;
  double den_scale;
};

inline constexpr std::array<ThermalRow, 8> kThermal = {{
    {1, 4, 8.10003e-03, 0.72602, 3, 1.03401e-02, 1.18530},
    {2, 4, 3.35247e-02, 0.53351, 3, 3.37925e-02, 1.15324},
    {3, 6, 9.27231e-03, 0.42483, 5, 7.30555e-03, 1.18960},
    {4, 6, 1.96455e-02, 0.37029, 5, 1.40523e-02, 1.18014},
    {5, 6, 3.36597e-02, 0.33182, 5, 2.25225e-02, 1.16846},
    {6, 8, 9.57788e-03, 0.29986, 5, 3.22698e-02, 1.15529},
    {7, 8, 1.51955e-02, 0.27823, 7, 8.56996e-03, 1.18781},
    {8, 8, 2.21488e-02, 0.26052, 7, 1.20692e-02, 1.18290},
}};

}  // namespace racbem::presets
