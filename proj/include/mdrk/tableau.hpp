#pragma once

// Coefficient data model for explicit two-derivative multistage methods:
//
//   y_i     = u + dt sum_j a_ij F(y_j) + dt^2 sum_j ahat_ij Ft(y_j),  i = 1..s
//   u_{n+1} = u + dt sum_j b_j  F(y_j) + dt^2 sum_j bhat_j  Ft(y_j)
//
// plus the block (s+1)x(s+1) form used by the SSP analysis and the
// Shu-Osher form that exposes convex combinations of base steps.

#include "mdrk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mdrk {

inline constexpr int kMaxStages = 16;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Structural class of a method. M2 adds stage order two; M3 additionally
/// evaluates the second derivative only at the first stage.
enum class Variant { M1, M2, M3, External };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::M1: return "M1";
    case Variant::M2: return "M2";
    case Variant::M3: return "M3";
    case Variant::External: return "external";
  }
  return "external";
}

inline Variant variant_from_string(const std::string& name) {
  if (name == "M1") return Variant::M1;
  if (name == "M2") return Variant::M2;
  if (name == "M3") return Variant::M3;
  if (name == "external") return Variant::External;
  throw Error("unknown variant '" + name + "'");
}

/// Immutable coefficient record (A, Ahat, b, bhat) of an s-stage method.
class Tableau {
public:
  Tableau(Matrix a, Matrix ahat, Vector b, Vector bhat,
          Variant variant = Variant::External, double design_k = kInfinity)
      : a_(std::move(a)), ahat_(std::move(ahat)), b_(std::move(b)),
        bhat_(std::move(bhat)), variant_(variant), design_k_(design_k) {
    const auto s = b_.size();
    if (s < 1) throw Error("tableau must have at least one stage");
    if (s > kMaxStages)
      throw Error("tableau has " + std::to_string(s) + " stages; at most " +
                  std::to_string(kMaxStages) + " are supported");
    if (a_.rows() != s || a_.cols() != s || ahat_.rows() != s ||
        ahat_.cols() != s || bhat_.size() != s)
      throw Error("tableau dimension mismatch: b has length " +
                  std::to_string(s) + " but A is " + std::to_string(a_.rows()) +
                  "x" + std::to_string(a_.cols()) + ", Ahat is " +
                  std::to_string(ahat_.rows()) + "x" +
                  std::to_string(ahat_.cols()) + ", bhat has length " +
                  std::to_string(bhat_.size()));
    if (!(design_k_ > 0.0)) throw Error("design K must be positive");
  }

  int stages() const { return static_cast<int>(b_.size()); }
  const Matrix& A() const { return a_; }
  const Matrix& Ahat() const { return ahat_; }
  const Vector& b() const { return b_; }
  const Vector& bhat() const { return bhat_; }
  Variant variant() const { return variant_; }
  double design_k() const { return design_k_; }

  Tableau with_variant(Variant v) const {
    return Tableau(a_, ahat_, b_, bhat_, v, design_k_);
  }

private:
  Matrix a_;
  Matrix ahat_;
  Vector b_;
  Vector bhat_;
  Variant variant_;
  double design_k_;
};

/// S = [[A, 0], [b^T, 0]] and Shat = [[Ahat, 0], [bhat^T, 0]].
struct BlockForm {
  Matrix S;
  Matrix Shat;
};

inline BlockForm block_form(const Tableau& t) {
  if (!linalg::is_strictly_lower(t.A()) || !linalg::is_strictly_lower(t.Ahat()))
    throw Error("block form requires an explicit (strictly lower triangular) tableau");
  const int s = t.stages();
  BlockForm f{Matrix::Zero(s + 1, s + 1), Matrix::Zero(s + 1, s + 1)};
  f.S.topLeftCorner(s, s) = t.A();
  f.S.row(s).head(s) = t.b().transpose();
  f.Shat.topLeftCorner(s, s) = t.Ahat();
  f.Shat.row(s).head(s) = t.bhat().transpose();
  return f;
}

struct Abscissae {
  Vector c;
  Vector chat;
};

inline Abscissae abscissae(const Tableau& t) {
  return {t.A().rowwise().sum(), t.Ahat().rowwise().sum()};
}

// ---------------------------------------------------------------------------
// Shu-Osher form
// ---------------------------------------------------------------------------

/// Shu-Osher coefficients. Each matrix is (s+1) x s; row i-1 holds the
/// weights of stage i (row 0 is the trivial first stage and stays zero), and
/// row s describes u_{n+1}.
struct ShuOsherForm {
  Matrix alpha;
  Matrix beta;
  Matrix alphahat;
  Matrix betahat;

  int stages() const { return static_cast<int>(alpha.cols()); }
};

inline constexpr double kRowSumTolerance = 1e-12;

inline Tableau shu_osher_to_butcher(const ShuOsherForm& f,
                                    Variant variant = Variant::External,
                                    double design_k = kInfinity) {
  const int s = f.stages();
  for (const Matrix* m : {&f.alpha, &f.beta, &f.alphahat, &f.betahat})
    if (m->rows() != s + 1 || m->cols() != s)
      throw Error("Shu-Osher matrices must all be (s+1) x s");
  for (int i = 1; i <= s; ++i) {
    double sum = 0.0;
    for (int j = 0; j < i; ++j) sum += f.alpha(i, j) + f.alphahat(i, j);
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw Error("Shu-Osher row " + std::to_string(i + 1) +
                  " is inconsistent: sum of alpha + alphahat is " +
                  std::to_string(sum) + ", expected 1");
  }
  // Stage k (0-based, k <= s) in terms of the Butcher weights: rows 0..s-1 of
  // (a, ahat) are the stages, row s is (b, bhat).
  Matrix a = Matrix::Zero(s + 1, s);
  Matrix ahat = Matrix::Zero(s + 1, s);
  for (int i = 1; i <= s; ++i) {
    for (int j = 0; j < i && j < s; ++j) {
      double aij = f.beta(i, j);
      double ahij = f.betahat(i, j);
      for (int k = j + 1; k < i; ++k) {
        const double w = f.alpha(i, k) + f.alphahat(i, k);
        aij += w * a(k, j);
        ahij += w * ahat(k, j);
      }
      a(i, j) = aij;
      ahat(i, j) = ahij;
    }
  }
  return Tableau(a.topRows(s), ahat.topRows(s), a.row(s).transpose(),
                 ahat.row(s).transpose(), variant, design_k);
}

// ---------------------------------------------------------------------------
// Structural validation
// ---------------------------------------------------------------------------

inline constexpr double kNegativeClampTolerance = 1e-14;

struct Diagnostic {
  enum class Kind { NotExplicit, NegativeEntry, StructureViolation };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> issues;
  int clamped_entries = 0;

  bool clean() const { return issues.empty(); }
};

namespace detail {

template <typename F>
void for_each_coefficient(const Tableau& t, F&& f) {
  const int s = t.stages();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      f("a", i, j, t.A()(i, j));
      f("ahat", i, j, t.Ahat()(i, j));
    }
  for (int j = 0; j < s; ++j) {
    f("b", -1, j, t.b()[j]);
    f("bhat", -1, j, t.bhat()[j]);
  }
}

inline std::string coefficient_name(const char* sym, int i, int j) {
  if (i < 0) return std::string(sym) + "_" + std::to_string(j + 1);
  return std::string(sym) + "_" + std::to_string(i + 1) + std::to_string(j + 1);
}

}  // namespace detail

/// Reports explicitness violations, negative coefficients and, for declared
/// M2/M3 tableaus, structural violations. Entries in [-1e-14, 0) count as
/// roundoff and are only tallied in clamped_entries.
inline ValidationReport validate(const Tableau& t, double stage_order_tol = 1e-10) {
  ValidationReport report;
  detail::for_each_coefficient(t, [&](const char* sym, int i, int j, double v) {
    const std::string name = detail::coefficient_name(sym, i, j);
    if (i >= 0 && j >= i && v != 0.0)
      report.issues.push_back({Diagnostic::Kind::NotExplicit,
                               name + " = " + std::to_string(v) +
                                   " lies on or above the diagonal"});
    if (v < -kNegativeClampTolerance)
      report.issues.push_back(
          {Diagnostic::Kind::NegativeEntry, name + " = " + std::to_string(v) + " is negative"});
    else if (v < 0.0)
      ++report.clamped_entries;
  });
  if (t.variant() == Variant::M3) {
    const int s = t.stages();
    for (int i = 0; i < s; ++i)
      for (int j = 1; j < s; ++j)
        if (t.Ahat()(i, j) != 0.0)
          report.issues.push_back({Diagnostic::Kind::StructureViolation,
                                   "M3 tableau has nonzero " +
                                       detail::coefficient_name("ahat", i, j)});
    for (int j = 1; j < s; ++j)
      if (t.bhat()[j] != 0.0)
        report.issues.push_back({Diagnostic::Kind::StructureViolation,
                                 "M3 tableau has nonzero " +
                                     detail::coefficient_name("bhat", -1, j)});
  }
  if (t.variant() == Variant::M2 || t.variant() == Variant::M3) {
    const auto [c, chat] = abscissae(t);
    const Vector tau2 = t.A() * c + chat - 0.5 * c.cwiseProduct(c);
    if (tau2.cwiseAbs().maxCoeff() > stage_order_tol)
      report.issues.push_back({Diagnostic::Kind::StructureViolation,
                               "declared " + to_string(t.variant()) +
                                   " tableau violates stage order two (|tau2| = " +
                                   std::to_string(tau2.cwiseAbs().maxCoeff()) + ")"});
  }
  return report;
}

/// Copy of t with roundoff-level negative entries set to zero.
inline Tableau clamp_roundoff(const Tableau& t) {
  auto clamp = [](auto m) {
    for (Eigen::Index k = 0; k < m.size(); ++k)
      if (m.data()[k] < 0.0 && m.data()[k] >= -kNegativeClampTolerance) m.data()[k] = 0.0;
    return m;
  };
  return Tableau(clamp(Matrix(t.A())), clamp(Matrix(t.Ahat())), clamp(Vector(t.b())),
                 clamp(Vector(t.bhat())), t.variant(), t.design_k());
}

// ---------------------------------------------------------------------------
// Reducibility
// ---------------------------------------------------------------------------

/// Partition of the stage indices (0-based) witnessing reducibility.
struct StagePartition {
  std::vector<int> removable;  // T1: stages that never reach the output
  std::vector<int> kept;       // T2
};

/// Returns a witness if some nonempty set of stages carries zero output
/// weight (b_j = bhat_j = 0) and feeds no stage outside the set.
inline std::optional<StagePartition> is_dj_reducible(const Tableau& t) {
  const int s = t.stages();
  std::vector<bool> in_t1(s, false);
  for (int j = 0; j < s; ++j) in_t1[j] = t.b()[j] == 0.0 && t.bhat()[j] == 0.0;
  // Shrink to the largest closed set: drop any stage consumed from outside.
  for (bool changed = true; changed;) {
    changed = false;
    for (int j = 0; j < s; ++j) {
      if (!in_t1[j]) continue;
      for (int i = 0; i < s; ++i) {
        if (in_t1[i]) continue;
        if (t.A()(i, j) != 0.0 || t.Ahat()(i, j) != 0.0) {
          in_t1[j] = false;
          changed = true;
          break;
        }
      }
    }
  }
  StagePartition p;
  for (int j = 0; j < s; ++j) (in_t1[j] ? p.removable : p.kept).push_back(j);
  if (p.removable.empty()) return std::nullopt;
  return p;
}

}  // namespace mdrk
