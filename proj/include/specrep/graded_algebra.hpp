#pragma once

#include <memory>
#include <string>
#include <vector>

namespace specrep {

class GradedAlgebra;
using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

// Element of a graded nilpotent Lie algebra in canonical coordinates.
// The same layout serves the simply connected group: components a_1..a_n
// with a_k living in the grading level R_k.
struct Element {
  AlgebraPtr algebra;
  std::vector<double> coords;  // flat, level-major

  double norm_inf() const;
};

struct SemidirectElement {
  double scale = 1.0;  // element of R*_+
  Element body;
};

enum class ViolationKind { Antisymmetry, GradingClosure, Jacobi, ClassSharpness };

struct Violation {
  ViolationKind kind;
  int i = -1, j = -1, k = -1;  // offending basis indices (-1 when unused)
  double defect = 0.0;
  std::string describe() const;
};

// Structure constants of a graded nilpotent Lie algebra of class n <= 5.
// The bracket table stores, for every ordered basis pair, a full-length
// coordinate vector; validation checks that nothing lands outside R_{i+j}.
class GradedAlgebra : public std::enable_shared_from_this<GradedAlgebra> {
 public:
  GradedAlgebra(int class_n, std::vector<int> dims,
                std::vector<std::vector<double>> bracket_table);

  int class_n() const { return class_n_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return total_dim_; }
  int level_of(int basis_index) const { return level_of_[basis_index]; }
  int level_offset(int level) const { return level_offset_[level - 1]; }
  int level_dim(int level) const { return dims_[level - 1]; }

  // [e_i, e_j] as a full coordinate vector.
  const std::vector<double>& basis_bracket(int i, int j) const {
    return table_[static_cast<std::size_t>(i) * total_dim_ + j];
  }

  std::vector<Violation> validate(double tol = 1e-12) const;

  Element zero() const;
  Element basis_element(int i) const;
  Element element(std::vector<double> coords) const;

  static AlgebraPtr abelian(int d);
  // Heisenberg algebra of order 2n-1: d = (2(n-1), 1), [x_i, y_i] = t.
  static AlgebraPtr heisenberg(int n);
  // Free nilpotent algebra on two generators, class c in {1, 2, 3}.
  static AlgebraPtr free_nilpotent_rank2(int c);

  static AlgebraPtr from_json_file(const std::string& path);
  static AlgebraPtr from_json_text(const std::string& text);

 private:
  int class_n_;
  std::vector<int> dims_;
  int total_dim_;
  std::vector<int> level_of_;
  std::vector<int> level_offset_;
  std::vector<std::vector<double>> table_;  // dim*dim entries, each of length dim
};

bool same_algebra(const Element& a, const Element& b);

Element bracket(const Element& a, const Element& b);
Element add(const Element& a, const Element& b);
Element scaled(double c, const Element& a);

// BCH/Dynkin product in canonical coordinates, exact for class n <= 5.
Element group_mul(const Element& a, const Element& b);
Element group_inv(const Element& a);
// Dilation automorphism a_k -> r^k a_k, r > 0.
Element dilate(double r, const Element& a);

SemidirectElement semidirect_identity(const AlgebraPtr& alg);
SemidirectElement semidirect_mul(const SemidirectElement& p, const SemidirectElement& q);
SemidirectElement semidirect_inv(const SemidirectElement& p);

// Derivation D a_k = k a_k and the extended bracket on L + {D}:
// [(a, s), (b, t)] = [a, b] + s Db - t Da.
Element derivation_apply(const Element& a);
Element extended_bracket(const Element& a, double s, const Element& b, double t);

}  // namespace specrep
