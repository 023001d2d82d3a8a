#pragma once

#include <map>
#include <string>
#include <vector>

#include "simlab/types.hpp"

namespace simlab::gallery {

/// A named construction with parameters. Scalar parameters live in `scalars`
/// (N, eps, K, q, M, N_sum, delta), matrix parameters in `matrices`
/// (B, A_inner), and packel_vj additionally takes `index_set` in
/// {"Z", "Z+", "Z-"}.
struct ModelSpec {
  std::string name;
  std::map<std::string, double> scalars;
  std::map<std::string, Matrix> matrices;
  std::string index_set = "Z+";
};

struct ModelInstance {
  ModelSpec spec;
  Eigen::Index dim = 0;
  bool has_generator = false;
  Matrix generator;  // valid when has_generator
};

/// Registered model names.
const std::vector<std::string>& model_names();

/// Validate parameters and size the instance. Throws BadParams naming the
/// offending field.
ModelInstance build_model(const ModelSpec& spec);

/// The model's T(t). Discrete models (foguel, eckstein) take integer t and
/// return the t-th power; grid-based models require grid-aligned t.
Matrix sample(const ModelInstance& instance, double t);

/// Cayley-type transform (A + I)(A - I)^{-1} = I + 2 (A - I)^{-1}; both forms
/// are computed and must agree.
Matrix cogenerator(const Matrix& a, const TolerancePolicy& tol = {});

// Direct access to the raw constructions, used by tests.
Matrix foguel_operator(int n);
Matrix shift_matrix(int n);  // e_i -> e_{i+1}

}  // namespace simlab::gallery
