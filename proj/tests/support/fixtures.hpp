#pragma once

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "swdelay/delay_model.hpp"
#include "swdelay/matrix.hpp"
#include "swdelay/perturb.hpp"

namespace fixtures {

using swdelay::DelaySubsystem;
using swdelay::DiscreteTerm;
using swdelay::DistributedKernel;
using swdelay::Matrix;
using swdelay::PerturbationStructure;
using swdelay::StructureQuadruple;
using swdelay::SwitchedDelaySystem;

inline std::string data_path(const std::string& name) { return std::string(SWDELAY_DATA_DIR) + "/" + name; }

// Two positive subsystems in R^2 with one delayed term at lag 1.
inline const Matrix kEx1A0[2] = {{{-5.0221, 0.2531}, {1.0103, -3.0105}}, {{-4.1023, 0.2517}, {0.5314, -2.4531}}};
inline const Matrix kEx1B[2] = {{{0.6321, 0.3507}, {1.0315, 0.2403}}, {{1.103, 0.5041}, {0.7013, 0.1102}}};

inline SwitchedDelaySystem ex1_system() {
  return SwitchedDelaySystem({DelaySubsystem(kEx1A0[0], {DiscreteTerm{1.0, kEx1B[0]}}),
                              DelaySubsystem(kEx1A0[1], {DiscreteTerm{1.0, kEx1B[1]}})},
                             1.0);
}

inline PerturbationStructure ex1_structure() {
  const Matrix e1 = Matrix{{0.0}, {1.0}};
  const Matrix e0 = Matrix{{1.0}, {0.0}};
  const Matrix eye = Matrix::identity(2);
  return PerturbationStructure({StructureQuadruple{e1, eye, e0, eye}, StructureQuadruple{e0, eye, e1, eye}}, 2);
}

// The large disturbance (delta_1..4, gamma_1..4) arranged per subsystem.
inline swdelay::Disturbance ex1_big_disturbance() {
  return {
      {Matrix{{5.012, 1.001}}, swdelay::DelayMeasure({DiscreteTerm{1.0, Matrix{{2.002, 1.901}}}}, std::nullopt)},
      {Matrix{{0.2005, 1.0102}}, swdelay::DelayMeasure({DiscreteTerm{1.0, Matrix{{2.012, 3.1023}}}}, std::nullopt)},
  };
}

// Three-state positive family with three discrete lags and a linear kernel on [-2, 0].
inline DistributedKernel linear_kernel(const Matrix& at_minus2, const Matrix& at_zero) {
  return DistributedKernel({-2.0, 0.0}, {at_minus2, at_zero});
}

inline DelaySubsystem ex2_subsystem(int k) {
  if (k == 0) {
    return DelaySubsystem(Matrix{{-18, 1, 0}, {1, -14, 1}, {1, 1, -13}},
                          {DiscreteTerm{0.5, Matrix{{1, 1, 1}, {1, 0, 1}, {1, 0, 1}}},
                           DiscreteTerm{1.0, Matrix{{1, 1, 0}, {1, 0, 1}, {1, 1, 2}}},
                           DiscreteTerm{2.0, Matrix{{1, 1, 1}, {1, 1, 1}, {0, 1, 0}}}},
                          linear_kernel(Matrix{{2, 0, 1}, {1, 1, 0}, {2, 0, 0}}, Matrix{{2, 0, 1}, {1, 1, 0}, {2, 0, 2}}));
  }
  if (k == 1) {
    return DelaySubsystem(Matrix{{-18, 1, 0}, {1, -15, 1}, {1, 1, -13}},
                          {DiscreteTerm{0.5, Matrix{{1, 1, 0}, {1, 0, 1}, {1, 0, 1}}},
                           DiscreteTerm{1.0, Matrix{{0, 1, 0}, {1, 0, 1}, {0, 1, 2}}},
                           DiscreteTerm{2.0, Matrix{{1, 0, 1}, {1, 0, 1}, {0, 1, 0}}}},
                          linear_kernel(Matrix{{2, 0, 0}, {0, 1, 0}, {2, 0, 0}}, Matrix{{2, 0, 0}, {0, 1, 0}, {2, 0, 2}}));
  }
  return DelaySubsystem(Matrix{{-19, 1, 0}, {1, -14, 1}, {1, 1, -15}},
                        {DiscreteTerm{0.5, Matrix{{0, 1, 1}, {1, 0, 1}, {1, 0, 1}}},
                         DiscreteTerm{1.0, Matrix{{1, 1, 0}, {0, 0, 1}, {1, 0, 1}}},
                         DiscreteTerm{2.0, Matrix{{1, 1, 1}, {0, 1, 1}, {0, 1, 0}}}},
                        linear_kernel(Matrix{{0, 0, 1}, {1, 1, 0}, {0, 0, 0}}, Matrix{{2, 0, 1}, {1, 1, 0}, {2, 0, 0}}));
}

inline DelaySubsystem ex2_bound() { return ex2_subsystem(0); }

inline SwitchedDelaySystem ex2_system() { return SwitchedDelaySystem({ex2_subsystem(1), ex2_subsystem(2)}, 2.0); }

inline SwitchedDelaySystem scalar_system(double a) {
  return SwitchedDelaySystem({DelaySubsystem(Matrix{{a}})}, std::nullopt);
}

inline SwitchedDelaySystem infeasible_system() {
  return SwitchedDelaySystem({DelaySubsystem(Matrix{{-1, 2}, {0, -1}}), DelaySubsystem(Matrix{{-1, 0}, {2, -1}})},
                             std::nullopt);
}

inline void expect_matrix_near(const Matrix& actual, const Matrix& expected, double tol, const char* what = "") {
  ASSERT_EQ(actual.rows(), expected.rows()) << what;
  ASSERT_EQ(actual.cols(), expected.cols()) << what;
  for (std::size_t i = 0; i < actual.rows(); ++i)
    for (std::size_t j = 0; j < actual.cols(); ++j)
      EXPECT_NEAR(actual(i, j), expected(i, j), tol) << what << " entry (" << i << "," << j << ")";
}

}  // namespace fixtures
