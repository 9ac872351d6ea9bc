#pragma once

// Order conditions of explicit two-derivative multistage methods through
// order six, one condition per rooted tree (1, 1, 2, 4, 9, 20 conditions for
// orders 1..6). Condition indices within an order are fixed; see
// kConditionCatalogue for the ordering.

#include "mdrk/linalg.hpp"
#include "mdrk/tableau.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mdrk {

struct ConditionResidual {
  int order = 0;
  int index = 0;  // 1-based position within its order
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs
};

namespace order_detail {

/// Precomputed vectors shared by the condition expressions. Naming: `c2` is
/// c⊙c, `Ac2` is A(c⊙c), `Ah` prefixes stand for Ahat, `ch` is chat.
struct Context {
  const Matrix& A;
  const Matrix& Ah;
  const Vector& b;
  const Vector& bh;
  Vector e, c, ch, c2, c3, c4, c5;
  Vector Ac, Ach, Ahc, Ahch;
  Vector AAc, Ac2, Ac3, Ahc2, Ahc3;

  Context(const Tableau& t)
      : A(t.A()), Ah(t.Ahat()), b(t.b()), bh(t.bhat()) {
    const auto s = b.size();
    e = Vector::Ones(s);
    c = A * e;
    ch = Ah * e;
    c2 = c.cwiseProduct(c);
    c3 = c2.cwiseProduct(c);
    c4 = c3.cwiseProduct(c);
    c5 = c4.cwiseProduct(c);
    Ac = A * c;
    Ach = A * ch;
    Ahc = Ah * c;
    Ahch = Ah * ch;
    AAc = A * Ac;
    Ac2 = A * c2;
    Ac3 = A * c3;
    Ahc2 = Ah * c2;
    Ahc3 = Ah * c3;
  }

  static Vector h(const Vector& x, const Vector& y) { return x.cwiseProduct(y); }
  static Vector h(const Vector& x, const Vector& y, const Vector& z) {
    return x.cwiseProduct(y).cwiseProduct(z);
  }
};

using Expression = double (*)(const Context&);

struct Condition {
  int order;
  std::int64_t num;
  std::int64_t den;
  Expression lhs;
};

// clang-format off
inline const std::array<Condition, 37> kConditionCatalogue = {{
  // p = 1
  {1, 1, 1, [](const Context& x) { return x.b.sum(); }},
  // p = 2
  {2, 1, 2, [](const Context& x) { return x.b.dot(x.c) + x.bh.sum(); }},
  // p = 3
  {3, 1, 3, [](const Context& x) { return x.b.dot(x.c2) + 2 * x.bh.dot(x.c); }},
  {3, 1, 6, [](const Context& x) { return x.b.dot(x.Ac) + x.b.dot(x.ch) + x.bh.dot(x.c); }},
  // p = 4
  {4, 1, 4, [](const Context& x) { return x.b.dot(x.c3) + 3 * x.bh.dot(x.c2); }},
  {4, 1, 8, [](const Context& x) {
     return x.b.dot(x.h(x.c, x.Ac)) + x.b.dot(x.h(x.c, x.ch)) + x.bh.dot(x.c2) +
            x.bh.dot(x.Ac) + x.bh.dot(x.ch); }},
  {4, 1, 12, [](const Context& x) { return x.b.dot(x.Ac2) + 2 * x.b.dot(x.Ahc) + x.bh.dot(x.c2); }},
  {4, 1, 24, [](const Context& x) {
     return x.b.dot(x.AAc) + x.b.dot(x.Ach) + x.b.dot(x.Ahc) + x.bh.dot(x.Ac) + x.bh.dot(x.ch); }},
  // p = 5
  {5, 1, 5, [](const Context& x) { return x.b.dot(x.c4) + 4 * x.bh.dot(x.c3); }},
  {5, 1, 10, [](const Context& x) {
     return x.b.dot(x.h(x.c2, x.Ac)) + x.b.dot(x.h(x.c2, x.ch)) + x.bh.dot(x.c3) +
            2 * x.bh.dot(x.h(x.c, x.Ac)) + 2 * x.bh.dot(x.h(x.c, x.ch)); }},
  {5, 1, 15, [](const Context& x) {
     return x.b.dot(x.h(x.c, x.Ac2)) + 2 * x.b.dot(x.h(x.c, x.Ahc)) + x.bh.dot(x.c3) +
            x.bh.dot(x.Ac2) + 2 * x.bh.dot(x.Ahc); }},
  {5, 1, 30, [](const Context& x) {
     return x.b.dot(x.h(x.c, x.AAc)) + x.b.dot(x.h(x.c, x.Ach)) + x.b.dot(x.h(x.c, x.Ahc)) +
            x.bh.dot(x.h(x.c, x.Ac)) + x.bh.dot(x.h(x.c, x.ch)) + x.bh.dot(x.AAc) +
            x.bh.dot(x.Ach) + x.bh.dot(x.Ahc); }},
  {5, 1, 20, [](const Context& x) {
     return x.b.dot(x.h(x.Ac, x.Ac)) + 2 * x.b.dot(x.h(x.ch, x.Ac)) + x.b.dot(x.h(x.ch, x.ch)) +
            2 * x.bh.dot(x.h(x.c, x.Ac)) + 2 * x.bh.dot(x.h(x.c, x.ch)); }},
  {5, 1, 20, [](const Context& x) { return x.b.dot(x.Ac3) + 3 * x.b.dot(x.Ahc2) + x.bh.dot(x.c3); }},
  {5, 1, 40, [](const Context& x) {
     return x.b.dot(x.A * x.h(x.c, x.Ac)) + x.b.dot(x.A * x.h(x.c, x.ch)) + x.b.dot(x.Ahc2) +
            x.b.dot(x.Ah * x.Ac) + x.b.dot(x.Ahch) + x.bh.dot(x.h(x.c, x.Ac)) +
            x.bh.dot(x.h(x.c, x.ch)); }},
  {5, 1, 60, [](const Context& x) {
     return x.b.dot(x.A * x.Ac2) + 2 * x.b.dot(x.A * x.Ahc) + x.b.dot(x.Ahc2) +
            x.bh.dot(x.Ac2) + 2 * x.bh.dot(x.Ahc); }},
  {5, 1, 120, [](const Context& x) {
     return x.b.dot(x.A * x.AAc) + x.b.dot(x.A * x.Ach) + x.b.dot(x.A * x.Ahc) +
            x.b.dot(x.Ah * x.Ac) + x.b.dot(x.Ahch) + x.bh.dot(x.AAc) + x.bh.dot(x.Ach) +
            x.bh.dot(x.Ahc); }},
  // p = 6
  {6, 1, 6, [](const Context& x) { return x.b.dot(x.c5) + 5 * x.bh.dot(x.c4); }},
  {6, 1, 12, [](const Context& x) {
     return x.b.dot(x.h(x.c3, x.Ac)) + 3 * x.bh.dot(x.h(x.c2, x.Ac)) + x.bh.dot(x.c4) +
            x.b.dot(x.h(x.c3, x.ch)) + 3 * x.bh.dot(x.h(x.c2, x.ch)); }},
  {6, 1, 18, [](const Context& x) {
     return x.b.dot(x.h(x.c2, x.Ac2)) + 2 * x.bh.dot(x.h(x.c, x.Ac2)) +
            2 * x.b.dot(x.h(x.c2, x.Ahc)) + x.bh.dot(x.c4) + 4 * x.bh.dot(x.h(x.c, x.Ahc)); }},
  {6, 1, 24, [](const Context& x) {
     return x.b.dot(x.h(x.c, x.Ac3)) + 3 * x.b.dot(x.h(x.c, x.Ahc2)) + x.bh.dot(x.Ac3) +
            3 * x.bh.dot(x.Ahc2) + x.bh.dot(x.c4); }},
  {6, 1, 30, [](const Context& x) {
     return x.b.dot(x.A * x.c4) + 4 * x.b.dot(x.Ahc3) + x.bh.dot(x.c4); }},
  {6, 1, 36, [](const Context& x) {
     return x.b.dot(x.h(x.c2, x.AAc)) + 2 * x.bh.dot(x.h(x.c, x.AAc)) +
            x.b.dot(x.h(x.c2, x.Ach)) + x.b.dot(x.h(x.c2, x.Ahc)) + x.bh.dot(x.h(x.c2, x.Ac)) +
            2 * x.bh.dot(x.h(x.c, x.Ach)) + 2 * x.bh.dot(x.h(x.c, x.Ahc)) +
            x.bh.dot(x.h(x.c2, x.ch)); }},
  {6, 1, 72, [](const Context& x) {
     return x.b.dot(x.h(x.c, x.A * x.Ac2)) + x.bh.dot(x.A * x.Ac2) + x.bh.dot(x.h(x.c, x.Ac2)) +
            x.b.dot(x.h(x.c, x.Ahc2)) + 2 * x.b.dot(x.h(x.c, x.A * x.Ahc)) + x.bh.dot(x.Ahc2) +
            2 * x.bh.dot(x.A * x.Ahc) + 2 * x.bh.dot(x.h(x.c, x.Ahc)); }},
  {6, 1, 120, [](const Context& x) {
     return x.b.dot(x.A * x.Ac3) + x.bh.dot(x.Ac3) + x.b.dot(x.Ahc3) +
            3 * x.b.dot(x.A * x.Ahc2) + 3 * x.bh.dot(x.Ahc2); }},
  // Trees [t, [t, [t]]], [[t, t, [t]]], [[t, [t, t]]] and [[t, [[t]]]]: an
  // operator in front of "c ⊙ y" applies to the whole product.
  {6, 1, 48, [](const Context& x) {
     const Vector cAc = x.h(x.c, x.Ac);
     const Vector cch = x.h(x.c, x.ch);
     return x.b.dot(x.h(x.c, x.A * cAc)) + x.bh.dot(x.A * cAc) + x.b.dot(x.h(x.c, x.Ah * x.Ac)) +
            x.b.dot(x.h(x.c, x.A * cch)) + x.bh.dot(x.h(x.c2, x.Ac)) + x.b.dot(x.h(x.c, x.Ahc2)) +
            x.bh.dot(x.Ah * x.Ac) + x.bh.dot(x.A * cch) + x.b.dot(x.h(x.c, x.Ahch)) +
            x.bh.dot(x.Ahc2) + x.bh.dot(x.h(x.c2, x.ch)) + x.bh.dot(x.Ahch); }},
  {6, 1, 60, [](const Context& x) {
     return x.b.dot(x.A * x.h(x.c2, x.Ac)) + x.b.dot(x.A * x.h(x.c2, x.ch)) +
            x.bh.dot(x.h(x.c2, x.Ac)) + 2 * x.b.dot(x.Ah * x.h(x.c, x.Ac)) + x.b.dot(x.Ahc3) +
            2 * x.b.dot(x.Ah * x.h(x.c, x.ch)) + x.bh.dot(x.h(x.c2, x.ch)); }},
  {6, 1, 90, [](const Context& x) {
     return x.b.dot(x.A * x.h(x.c, x.Ac2)) + x.bh.dot(x.h(x.c, x.Ac2)) + x.b.dot(x.Ah * x.Ac2) +
            x.b.dot(x.Ahc3) + 2 * x.b.dot(x.A * x.h(x.c, x.Ahc)) + 2 * x.b.dot(x.Ah * x.Ahc) +
            2 * x.bh.dot(x.h(x.c, x.Ahc)); }},
  {6, 1, 144, [](const Context& x) {
     return x.b.dot(x.h(x.c, x.A * x.AAc)) + x.bh.dot(x.A * x.AAc) + x.bh.dot(x.h(x.c, x.AAc)) +
            x.b.dot(x.h(x.c, x.Ah * x.Ac)) + x.b.dot(x.h(x.c, x.A * x.Ahc)) +
            x.b.dot(x.h(x.c, x.A * x.Ach)) + x.bh.dot(x.Ah * x.Ac) + x.bh.dot(x.A * x.Ahc) +
            x.bh.dot(x.A * x.Ach) + x.b.dot(x.h(x.c, x.Ahch)) + x.bh.dot(x.h(x.c, x.Ach)) +
            x.bh.dot(x.h(x.c, x.Ahc)) + x.bh.dot(x.Ahch); }},
  {6, 1, 180, [](const Context& x) {
     return x.b.dot(x.A * x.h(x.c, x.AAc)) + x.b.dot(x.A * x.h(x.c, x.Ach)) +
            x.b.dot(x.A * x.h(x.c, x.Ahc)) + x.b.dot(x.Ah * x.h(x.c, x.Ac)) +
            x.b.dot(x.Ah * x.AAc) + x.bh.dot(x.h(x.c, x.AAc)) + x.b.dot(x.Ah * x.h(x.c, x.ch)) +
            x.b.dot(x.Ah * x.Ach) + x.bh.dot(x.h(x.c, x.Ach)) + x.b.dot(x.Ah * x.Ahc) +
            x.bh.dot(x.h(x.c, x.Ahc)); }},
  {6, 1, 240, [](const Context& x) {
     return x.b.dot(x.A * (x.A * x.h(x.c, x.Ac))) + x.b.dot(x.A * (x.A * x.h(x.c, x.ch))) +
            x.b.dot(x.A * x.Ahc2) + x.b.dot(x.A * (x.Ah * x.Ac)) + x.b.dot(x.Ah * x.h(x.c, x.Ac)) +
            x.bh.dot(x.A * x.h(x.c, x.Ac)) + x.b.dot(x.A * x.Ahch) +
            x.b.dot(x.Ah * x.h(x.c, x.ch)) + x.bh.dot(x.A * x.h(x.c, x.ch)) + x.bh.dot(x.Ahc2) +
            x.bh.dot(x.Ah * x.Ac) + x.bh.dot(x.Ahch); }},
  {6, 1, 360, [](const Context& x) {
     return x.b.dot(x.A * (x.A * x.Ac2)) + x.bh.dot(x.A * x.Ac2) + x.b.dot(x.Ah * x.Ac2) +
            x.b.dot(x.A * x.Ahc2) + 2 * x.b.dot(x.A * (x.A * x.Ahc)) + x.bh.dot(x.Ahc2) +
            2 * x.bh.dot(x.A * x.Ahc) + 2 * x.b.dot(x.Ah * x.Ahc); }},
  {6, 1, 24, [](const Context& x) {
     return x.b.dot(x.h(x.c, x.Ac, x.Ac)) + x.bh.dot(x.h(x.Ac, x.Ac)) +
            2 * x.b.dot(x.h(x.c, x.ch, x.Ac)) + 2 * x.bh.dot(x.h(x.c2, x.Ac)) +
            2 * x.bh.dot(x.h(x.ch, x.Ac)) + 2 * x.bh.dot(x.h(x.c2, x.ch)) +
            x.b.dot(x.h(x.c, x.ch, x.ch)) + x.bh.dot(x.h(x.ch, x.ch)); }},
  {6, 1, 72, [](const Context& x) {
     return x.b.dot(x.h(x.Ac, x.AAc)) + x.b.dot(x.h(x.ch, x.AAc)) + x.bh.dot(x.h(x.c, x.AAc)) +
            x.bh.dot(x.h(x.Ac, x.Ac)) + x.b.dot(x.h(x.Ac, x.Ahc)) + x.b.dot(x.h(x.Ac, x.Ach)) +
            2 * x.bh.dot(x.h(x.ch, x.Ac)) + x.b.dot(x.h(x.ch, x.Ahc)) +
            x.b.dot(x.h(x.ch, x.Ach)) + x.bh.dot(x.h(x.c, x.Ahc)) + x.bh.dot(x.h(x.c, x.Ach)) +
            x.bh.dot(x.h(x.ch, x.ch)); }},
  {6, 1, 36, [](const Context& x) {
     return x.b.dot(x.h(x.Ac, x.Ac2)) + x.b.dot(x.h(x.ch, x.Ac2)) + x.bh.dot(x.h(x.c, x.Ac2)) +
            x.bh.dot(x.h(x.Ac, x.c2)) + 2 * x.b.dot(x.h(x.Ac, x.Ahc)) +
            x.bh.dot(x.h(x.ch, x.c2)) + 2 * x.b.dot(x.h(x.ch, x.Ahc)) +
            2 * x.bh.dot(x.h(x.c, x.Ahc)); }},
  {6, 1, 120, [](const Context& x) {
     return x.b.dot(x.A * x.h(x.Ac, x.Ac)) + 2 * x.b.dot(x.A * x.h(x.ch, x.Ac)) +
            2 * x.b.dot(x.Ah * x.h(x.c, x.Ac)) + x.bh.dot(x.h(x.Ac, x.Ac)) +
            2 * x.bh.dot(x.h(x.ch, x.Ac)) + 2 * x.b.dot(x.Ah * x.h(x.c, x.ch)) +
            x.b.dot(x.A * x.h(x.ch, x.ch)) + x.bh.dot(x.h(x.ch, x.ch)); }},
  {6, 1, 720, [](const Context& x) {
     return x.b.dot(x.A * (x.A * x.AAc)) + x.b.dot(x.A * (x.A * x.Ach)) +
            x.b.dot(x.A * (x.A * x.Ahc)) + x.b.dot(x.A * (x.Ah * x.Ac)) +
            x.b.dot(x.Ah * x.AAc) + x.bh.dot(x.A * x.AAc) + x.b.dot(x.A * x.Ahch) +
            x.b.dot(x.Ah * x.Ach) + x.bh.dot(x.A * x.Ach) + x.b.dot(x.Ah * x.Ahc) +
            x.bh.dot(x.A * x.Ahc) + x.bh.dot(x.Ah * x.Ac) + x.bh.dot(x.Ahch); }},
}};
// clang-format on

inline constexpr std::array<int, 7> kFirstIndexOfOrder = {0, 0, 1, 2, 4, 8, 17};
inline constexpr std::array<int, 7> kCountOfOrder = {0, 1, 1, 2, 4, 9, 20};

}  // namespace order_detail

inline constexpr int kMaxOrder = 6;

/// Number of conditions of order exactly p.
inline int condition_count(int p) {
  if (p < 1 || p > kMaxOrder) throw Error("order must lie in 1..6, got " + std::to_string(p));
  return order_detail::kCountOfOrder[p];
}

/// Every condition of order exactly p, in catalogue order.
inline std::vector<ConditionResidual> residuals(const Tableau& t, int p) {
  const int count = condition_count(p);
  const order_detail::Context ctx(t);
  std::vector<ConditionResidual> out;
  out.reserve(count);
  const int first = order_detail::kFirstIndexOfOrder[p];
  for (int k = 0; k < count; ++k) {
    const auto& cond = order_detail::kConditionCatalogue[first + k];
    const double rhs = static_cast<double>(cond.num) / static_cast<double>(cond.den);
    const double lhs = cond.lhs(ctx);
    out.push_back({p, k + 1, lhs, rhs, lhs - rhs});
  }
  return out;
}

/// All residuals of orders 1..p stacked into one vector.
inline Vector residual_vector(const Tableau& t, int p) {
  if (p < 1 || p > kMaxOrder) throw Error("order must lie in 1..6, got " + std::to_string(p));
  const order_detail::Context ctx(t);
  const int n = order_detail::kFirstIndexOfOrder[p] + order_detail::kCountOfOrder[p];
  Vector r(n);
  for (int k = 0; k < n; ++k) {
    const auto& cond = order_detail::kConditionCatalogue[k];
    r[k] = cond.lhs(ctx) - static_cast<double>(cond.num) / static_cast<double>(cond.den);
  }
  return r;
}

/// Largest P <= 6 such that every condition of order <= P holds to tol.
inline int order_of(const Tableau& t, double tol = 1e-10) {
  if (!(tol > 0.0)) throw Error("order tolerance must be positive");
  int order = 0;
  for (int p = 1; p <= kMaxOrder; ++p) {
    for (const auto& r : residuals(t, p))
      if (!(std::abs(r.residual) < tol)) return order;
    order = p;
  }
  return order;
}

/// Stage-order-two residual A c + chat - c⊙c / 2.
inline Vector tau2_residual(const Tableau& t) {
  const auto [c, chat] = abscissae(t);
  return t.A() * c + chat - 0.5 * c.cwiseProduct(c);
}

/// Stage-order-three residual A c⊙c + Ahat c - c⊙c⊙c / 3.
inline Vector tau3_residual(const Tableau& t) {
  const Vector c = abscissae(t).c;
  const Vector c2 = c.cwiseProduct(c);
  return t.A() * c2 + t.Ahat() * c - c2.cwiseProduct(c) / 3.0;
}

}  // namespace mdrk
