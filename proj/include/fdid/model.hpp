#pragma once

// sum_{j=0}^{n_a} A_j x^{(j)} = sum_{k=0}^{n_b} B_k u^{(k)},  A_{n_a} = I.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdid/error.hpp"

namespace fdid {

struct ModelStructure {
  int n_x = 1;
  int n_u = 1;
  int n_a = 1;
  int n_b = 0;

  void validate() const {
    require(n_x >= 1 && n_u >= 1, "n_x and n_u must be positive");
    require(n_u <= n_x, "n_u must not exceed n_x");
    require(n_a >= 1, "n_a must be >= 1");
    require(n_b >= 0, "n_b must be >= 0");
  }

  // Rows of the free regressor block: A_{n_a-1}..A_0 then B_{n_b}..B_0.
  int free_rows() const { return n_a * n_x + (n_b + 1) * n_u; }
  int free_parameter_count() const { return n_x * free_rows(); }

  friend bool operator==(const ModelStructure&, const ModelStructure&) = default;
};

struct ModelParams {
  ModelStructure structure;
  std::vector<Eigen::MatrixXd> A;  // A[j], j = 0..n_a
  std::vector<Eigen::MatrixXd> B;  // B[k], k = 0..n_b

  static ModelParams zeros(const ModelStructure& s) {
    s.validate();
    ModelParams p;
    p.structure = s;
    p.A.assign(static_cast<std::size_t>(s.n_a) + 1, Eigen::MatrixXd::Zero(s.n_x, s.n_x));
    p.B.assign(static_cast<std::size_t>(s.n_b) + 1, Eigen::MatrixXd::Zero(s.n_x, s.n_u));
    p.A.back().setIdentity();
    return p;
  }

  void validate() const {
    structure.validate();
    require(A.size() == static_cast<std::size_t>(structure.n_a) + 1, "wrong number of A matrices");
    require(B.size() == static_cast<std::size_t>(structure.n_b) + 1, "wrong number of B matrices");
    for (const auto& a : A) require(a.rows() == structure.n_x && a.cols() == structure.n_x, "A matrix has wrong shape");
    for (const auto& b : B) require(b.rows() == structure.n_x && b.cols() == structure.n_u, "B matrix has wrong shape");
  }

  // [A_{n_a-1} .. A_0, B_{n_b} .. B_0], n_x x free_rows.
  Eigen::MatrixXd free_block() const {
    const auto& s = structure;
    Eigen::MatrixXd theta(s.n_x, s.free_rows());
    Eigen::Index col = 0;
    for (int j = s.n_a - 1; j >= 0; --j, col += s.n_x) theta.middleCols(col, s.n_x) = A[static_cast<std::size_t>(j)];
    for (int k = s.n_b; k >= 0; --k, col += s.n_u) theta.middleCols(col, s.n_u) = B[static_cast<std::size_t>(k)];
    return theta;
  }

  static ModelParams from_free_block(const ModelStructure& s, const Eigen::MatrixXd& theta) {
    require(theta.rows() == s.n_x && theta.cols() == s.free_rows(), "free parameter block has wrong shape");
    ModelParams p = zeros(s);
    Eigen::Index col = 0;
    for (int j = s.n_a - 1; j >= 0; --j, col += s.n_x) p.A[static_cast<std::size_t>(j)] = theta.middleCols(col, s.n_x);
    for (int k = s.n_b; k >= 0; --k, col += s.n_u) p.B[static_cast<std::size_t>(k)] = theta.middleCols(col, s.n_u);
    return p;
  }
};

}  // namespace fdid
