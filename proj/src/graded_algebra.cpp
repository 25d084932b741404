#include "specrep/graded_algebra.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "specrep/bch.hpp"

namespace specrep {

double Element::norm_inf() const {
  double m = 0.0;
  for (double x : coords) m = std::max(m, std::abs(x));
  return m;
}

std::string Violation::describe() const {
  char buf[160];
  switch (kind) {
    case ViolationKind::Antisymmetry:
      std::snprintf(buf, sizeof(buf), "antisymmetry violated on basis pair (%d,%d), defect %.3e", i, j, defect);
      break;
    case ViolationKind::GradingClosure:
      std::snprintf(buf, sizeof(buf), "grading closure violated on basis pair (%d,%d), defect %.3e", i, j, defect);
      break;
    case ViolationKind::Jacobi:
      std::snprintf(buf, sizeof(buf), "Jacobi identity violated on basis triple (%d,%d,%d), defect %.3e", i, j, k, defect);
      break;
    case ViolationKind::ClassSharpness:
      std::snprintf(buf, sizeof(buf), "class not sharp: all %d-fold brackets of R_1 basis vectors vanish", i);
      break;
  }
  return buf;
}

GradedAlgebra::GradedAlgebra(int class_n, std::vector<int> dims,
                             std::vector<std::vector<double>> bracket_table)
    : class_n_(class_n), dims_(std::move(dims)) {
  if (class_n_ < 1 || class_n_ > kBchMaxDepth)
    throw std::invalid_argument("GradedAlgebra: class must be in [1, 5]");
  if (static_cast<int>(dims_.size()) != class_n_)
    throw std::invalid_argument("GradedAlgebra: dims list must have one entry per level");
  total_dim_ = 0;
  for (int d : dims_) {
    if (d < 0) throw std::invalid_argument("GradedAlgebra: negative level dimension");
    total_dim_ += d;
  }
  if (total_dim_ == 0) throw std::invalid_argument("GradedAlgebra: empty algebra");
  level_of_.resize(static_cast<std::size_t>(total_dim_));
  level_offset_.resize(dims_.size());
  int off = 0;
  for (int lv = 1; lv <= class_n_; ++lv) {
    level_offset_[lv - 1] = off;
    for (int t = 0; t < dims_[lv - 1]; ++t) level_of_[static_cast<std::size_t>(off + t)] = lv;
    off += dims_[lv - 1];
  }
  const std::size_t want = static_cast<std::size_t>(total_dim_) * static_cast<std::size_t>(total_dim_);
  if (bracket_table.size() != want)
    throw std::invalid_argument("GradedAlgebra: bracket table must have dim*dim entries");
  for (const auto& v : bracket_table)
    if (static_cast<int>(v.size()) != total_dim_)
      throw std::invalid_argument("GradedAlgebra: bracket entries must have full algebra length");
  table_ = std::move(bracket_table);
}

std::vector<Violation> GradedAlgebra::validate(double tol) const {
  std::vector<Violation> out;
  const int D = total_dim_;
  // Antisymmetry and grading closure per ordered pair.
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      const auto& cij = basis_bracket(i, j);
      const auto& cji = basis_bracket(j, i);
      double anti = 0.0;
      for (int t = 0; t < D; ++t) anti = std::max(anti, std::abs(cij[t] + cji[t]));
      if (j >= i && anti > tol)
        out.push_back({ViolationKind::Antisymmetry, i, j, -1, anti});
      const int target = level_of_[static_cast<std::size_t>(i)] + level_of_[static_cast<std::size_t>(j)];
      double outside = 0.0;
      for (int t = 0; t < D; ++t)
        if (level_of_[static_cast<std::size_t>(t)] != target) outside = std::max(outside, std::abs(cij[t]));
      if (outside > tol)
        out.push_back({ViolationKind::GradingClosure, i, j, -1, outside});
    }
  }
  // Jacobi on all basis triples.
  for (int i = 0; i < D; ++i) {
    Element ei = basis_element(i);
    for (int j = i + 1; j < D; ++j) {
      Element ej = basis_element(j);
      for (int k = j + 1; k < D; ++k) {
        Element ek = basis_element(k);
        Element s = add(bracket(ei, bracket(ej, ek)),
                        add(bracket(ej, bracket(ek, ei)), bracket(ek, bracket(ei, ej))));
        const double defect = s.norm_inf();
        if (defect > tol) out.push_back({ViolationKind::Jacobi, i, j, k, defect});
      }
    }
  }
  // Class sharpness: some n-fold right-nested bracket of R_1 basis vectors
  // must be nonzero.
  if (class_n_ >= 2) {
    const int d1 = dims_[0];
    bool nonzero = false;
    std::vector<int> word(static_cast<std::size_t>(class_n_), 0);
    while (true) {
      Element v = basis_element(word[static_cast<std::size_t>(class_n_ - 1)]);
      for (int p = class_n_ - 2; p >= 0; --p) v = bracket(basis_element(word[static_cast<std::size_t>(p)]), v);
      if (v.norm_inf() > tol) {
        nonzero = true;
        break;
      }
      int p = class_n_ - 1;
      while (p >= 0 && word[static_cast<std::size_t>(p)] == d1 - 1) {
        word[static_cast<std::size_t>(p)] = 0;
        --p;
      }
      if (p < 0) break;
      ++word[static_cast<std::size_t>(p)];
    }
    if (!nonzero) out.push_back({ViolationKind::ClassSharpness, class_n_, -1, -1, 0.0});
  } else if (dims_[0] == 0) {
    out.push_back({ViolationKind::ClassSharpness, 1, -1, -1, 0.0});
  }
  return out;
}

Element GradedAlgebra::zero() const {
  return {shared_from_this(), std::vector<double>(static_cast<std::size_t>(total_dim_), 0.0)};
}

Element GradedAlgebra::basis_element(int i) const {
  Element e = zero();
  e.coords[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

Element GradedAlgebra::element(std::vector<double> coords) const {
  if (static_cast<int>(coords.size()) != total_dim_)
    throw std::invalid_argument("element: coordinate length mismatch");
  return {shared_from_this(), std::move(coords)};
}

bool same_algebra(const Element& a, const Element& b) {
  return a.algebra.get() == b.algebra.get();
}

static void require_same(const Element& a, const Element& b, const char* op) {
  if (!a.algebra || !b.algebra || !same_algebra(a, b))
    throw std::invalid_argument(std::string(op) + ": elements belong to different algebras");
}

Element bracket(const Element& a, const Element& b) {
  require_same(a, b, "bracket");
  const auto& alg = *a.algebra;
  const int D = alg.dim();
  Element out = alg.zero();
  for (int i = 0; i < D; ++i) {
    const double ai = a.coords[static_cast<std::size_t>(i)];
    if (ai == 0.0) continue;
    for (int j = 0; j < D; ++j) {
      const double bj = b.coords[static_cast<std::size_t>(j)];
      if (bj == 0.0) continue;
      const auto& c = alg.basis_bracket(i, j);
      const double w = ai * bj;
      for (int t = 0; t < D; ++t) out.coords[static_cast<std::size_t>(t)] += w * c[t];
    }
  }
  return out;
}

Element add(const Element& a, const Element& b) {
  require_same(a, b, "add");
  Element out = a;
  for (std::size_t t = 0; t < out.coords.size(); ++t) out.coords[t] += b.coords[t];
  return out;
}

Element scaled(double c, const Element& a) {
  Element out = a;
  for (double& x : out.coords) x *= c;
  return out;
}

Element group_mul(const Element& a, const Element& b) {
  require_same(a, b, "group_mul");
  const auto& alg = *a.algebra;
  // Bracket corrections are accumulated separately from the linear part so
  // that exact cancellations between mirror words survive in floating point.
  Element corr = alg.zero();
  for (const BchWord& w : bch_words(alg.class_n())) {
    if (w.letters.size() < 2) continue;  // linear part handled below
    const std::size_t m = w.letters.size();
    Element v = (w.letters[m - 1] == 0) ? a : b;
    for (std::size_t p = m - 1; p-- > 0;) v = bracket((w.letters[p] == 0) ? a : b, v);
    corr = add(corr, scaled(w.coeff, v));
  }
  return add(add(a, b), corr);
}

Element group_inv(const Element& a) {
  // Exponential coordinates of the first kind: inverse is negation.
  return scaled(-1.0, a);
}

Element dilate(double r, const Element& a) {
  if (!(r > 0.0)) throw std::invalid_argument("dilate: scale must be positive");
  Element out = a;
  const auto& alg = *a.algebra;
  for (int t = 0; t < alg.dim(); ++t)
    out.coords[static_cast<std::size_t>(t)] *= std::pow(r, alg.level_of(t));
  return out;
}

SemidirectElement semidirect_identity(const AlgebraPtr& alg) {
  return {1.0, alg->zero()};
}

SemidirectElement semidirect_mul(const SemidirectElement& p, const SemidirectElement& q) {
  return {p.scale * q.scale, group_mul(dilate(q.scale, p.body), q.body)};
}

SemidirectElement semidirect_inv(const SemidirectElement& p) {
  return {1.0 / p.scale, group_inv(dilate(1.0 / p.scale, p.body))};
}

Element derivation_apply(const Element& a) {
  Element out = a;
  const auto& alg = *a.algebra;
  for (int t = 0; t < alg.dim(); ++t)
    out.coords[static_cast<std::size_t>(t)] *= alg.level_of(t);
  return out;
}

Element extended_bracket(const Element& a, double s, const Element& b, double t) {
  Element out = bracket(a, b);
  out = add(out, scaled(s, derivation_apply(b)));
  out = add(out, scaled(-t, derivation_apply(a)));
  return out;
}

// ---- built-in generators ----------------------------------------------

static std::vector<std::vector<double>> empty_table(int D) {
  return std::vector<std::vector<double>>(static_cast<std::size_t>(D) * static_cast<std::size_t>(D),
                                          std::vector<double>(static_cast<std::size_t>(D), 0.0));
}

static void set_bracket(std::vector<std::vector<double>>& tab, int D, int i, int j, int target,
                        double value) {
  tab[static_cast<std::size_t>(i) * D + j][static_cast<std::size_t>(target)] += value;
  tab[static_cast<std::size_t>(j) * D + i][static_cast<std::size_t>(target)] -= value;
}

AlgebraPtr GradedAlgebra::abelian(int d) {
  return std::make_shared<GradedAlgebra>(1, std::vector<int>{d}, empty_table(d));
}

AlgebraPtr GradedAlgebra::heisenberg(int n) {
  if (n < 2) throw std::invalid_argument("heisenberg: order 2n-1 needs n >= 2");
  const int m = n - 1;
  const int D = 2 * m + 1;
  auto tab = empty_table(D);
  for (int i = 0; i < m; ++i) set_bracket(tab, D, i, m + i, 2 * m, 1.0);
  return std::make_shared<GradedAlgebra>(2, std::vector<int>{2 * m, 1}, std::move(tab));
}

AlgebraPtr GradedAlgebra::free_nilpotent_rank2(int c) {
  if (c == 1) return abelian(2);
  if (c == 2) return heisenberg(2);
  if (c != 3) throw std::invalid_argument("free_nilpotent_rank2: class must be in {1,2,3}");
  // Basis: X, Y | Z = [X,Y] | A = [X,Z], B = [Y,Z].
  const int D = 5;
  auto tab = empty_table(D);
  set_bracket(tab, D, 0, 1, 2, 1.0);
  set_bracket(tab, D, 0, 2, 3, 1.0);
  set_bracket(tab, D, 1, 2, 4, 1.0);
  return std::make_shared<GradedAlgebra>(3, std::vector<int>{2, 1, 2}, std::move(tab));
}

// ---- JSON loading ------------------------------------------------------

AlgebraPtr GradedAlgebra::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int class_n = j.at("class").get<int>();
  const std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  int D = 0;
  for (int d : dims) D += d;
  auto tab = empty_table(D);
  for (const auto& entry : j.at("brackets")) {
    const int i = entry.at("i").get<int>();
    const int jj = entry.at("j").get<int>();
    std::vector<double> v = entry.at("v").get<std::vector<double>>();
    if (i < 0 || i >= D || jj < 0 || jj >= D)
      throw std::invalid_argument("algebra json: basis index out of range");
    if (static_cast<int>(v.size()) != D)
      throw std::invalid_argument("algebra json: bracket vector length mismatch");
    tab[static_cast<std::size_t>(i) * D + jj] = std::move(v);
  }
  return std::make_shared<GradedAlgebra>(class_n, dims, std::move(tab));
}

AlgebraPtr GradedAlgebra::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open algebra file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace specrep
