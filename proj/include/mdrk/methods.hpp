#pragma once

// Built-in method registry, the closed-form three-stage fourth-order M3
// family, and the JSON-shaped tableau file format:
//
//   { "name": "...", "s": 4, "p_design": 5, "K_design": 1 | "inf",
//     "variant": "M1" | "M2" | "M3" | "external",
//     "A": [[...], ...], "Ahat": [[...], ...], "b": [...], "bhat": [...] }

#include "mdrk/generated_methods.hpp"
#include "mdrk/linalg.hpp"
#include "mdrk/tableau.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mdrk {

class UnknownMethodError : public Error {
public:
  using Error::Error;
};

class FileFormatError : public Error {
public:
  using Error::Error;
};

enum class MethodSource {
  Published,  // coefficients transcribed from the literature
  ClosedFormFamily,
  BuiltinBasic,
  OptimizerGenerated,
  ExternalFile,
};

inline std::string to_string(MethodSource s) {
  switch (s) {
    case MethodSource::Published: return "published";
    case MethodSource::ClosedFormFamily: return "closed_form_family";
    case MethodSource::BuiltinBasic: return "builtin_basic";
    case MethodSource::OptimizerGenerated: return "optimizer_generated";
    case MethodSource::ExternalFile: return "external_file";
  }
  return "external_file";
}

struct MethodRecord {
  std::string name;
  Tableau tableau;
  int claimed_order = 0;
  std::optional<double> claimed_cts;  // at tableau.design_k()
  MethodSource source = MethodSource::ExternalFile;
};

namespace methods_detail {

inline Matrix lower(int s, std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m = Matrix::Zero(s, s);
  int i = 1;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

inline MethodRecord forward_euler() {
  return {"FE",
          Tableau(Matrix::Zero(1, 1), Matrix::Zero(1, 1), vec({1.0}), vec({0.0}),
                  Variant::External, kInfinity),
          1, 1.0, MethodSource::BuiltinBasic};
}

inline MethodRecord taylor_series() {
  return {"TS",
          Tableau(Matrix::Zero(1, 1), Matrix::Zero(1, 1), vec({1.0}), vec({0.5}),
                  Variant::External, 1.0),
          2, 1.0, MethodSource::BuiltinBasic};
}

inline MethodRecord m3_3_4_1() {
  return {"M3(3,4,1)",
          Tableau(lower(3, {{1.0}, {14.0 / 27.0, 4.0 / 27.0}}),
                  lower(3, {{0.5}, {2.0 / 27.0, 0.0}}),
                  vec({17.0 / 48.0, 4.0 / 48.0, 27.0 / 48.0}), vec({1.0 / 24.0, 0.0, 0.0}),
                  Variant::M3, 1.0),
          4, 1.0, MethodSource::Published};
}

inline MethodRecord m2_4_4_inf() {
  const double q = 0.25;
  const double h = 1.0 / 32.0;
  return {"M2(4,4,inf)",
          Tableau(lower(4, {{q}, {q, q}, {q, q, q}}), lower(4, {{h}, {h, h}, {0.0, h, 2 * h}}),
                  vec({q, q, q, q}),
                  vec({5.0 / 288.0, 12.0 / 288.0, 3.0 / 288.0, 16.0 / 288.0}), Variant::M2,
                  kInfinity),
          4, 4.0, MethodSource::Published};
}

inline MethodRecord two_stage_fourth_order() {
  return {"2s4p",
          Tableau(lower(2, {{0.5}}), lower(2, {{0.125}}), vec({1.0, 0.0}),
                  vec({1.0 / 6.0, 1.0 / 3.0}), Variant::External, kInfinity),
          4, std::nullopt, MethodSource::Published};
}

inline MethodRecord m2_4_5_1() {
  const Matrix a = lower(4, {{4.280141748183123e-01},
                             {3.174364422211321e-01, 1.032647478325804e-01},
                             {3.280547501426051e-01, 9.334228125655676e-02,
                              4.134096583922347e-01}});
  const Matrix ahat = lower(4, {{9.159806692270039e-02},
                                {2.068159838961376e-02, 2.361437143530821e-02},
                                {1.869435227642530e-02, 2.134532206271365e-02,
                                 9.453767556809974e-02}});
  return {"M2(4,5,1)",
          Tableau(a, ahat,
                  vec({3.456442194983256e-01, 1.551487425849178e-01, 3.458932447335502e-01,
                       1.533137931832064e-01}),
                  vec({3.226836941745746e-02, 1.785928934720153e-02, 7.490191551289183e-02,
                       3.505948481328697e-02}),
                  Variant::M2, 1.0),
          5, 2.18648, MethodSource::Published};
}

inline MethodRecord m3_8_6_1() {
  const Matrix a = lower(
      8, {{3.498630949258150e-01},
          {2.253295269463227e-01, 1.807161013759724e-01},
          {2.071695605568409e-01, 4.100178308548576e-02, 1.306253212278126e-01},
          {1.667117585911237e-01, 2.009667996165993e-02, 6.402490521280881e-02,
           2.821909187189924e-01},
          {1.493141923275556e-01, 1.319303489675465e-02, 4.203095914776495e-02,
           1.852522020371737e-01, 3.779563241192044e-01},
          {2.148681581922796e-01, 1.533420472452636e-01, 1.813808417863181e-02,
           7.994387176143736e-02, 1.630752796649391e-01, 2.484093806816690e-01},
          {2.036762412289922e-01, 1.456707401767411e-01, 2.379744031395224e-02,
           1.048777345557326e-01, 2.139668745571685e-01, 6.560681670556633e-02,
           1.520556075200664e-01}});
  const Matrix ahat = lower(8, {{6.120209259553491e-02},
                                {1.921063160949869e-02},
                                {4.358605297856505e-03},
                                {2.136333816692593e-03},
                                {1.402456855983780e-03},
                                {1.631142330728269e-02},
                                {1.548804492637956e-02}});
  Vector bhat = Vector::Zero(8);
  bhat[0] = 1.156518516980132e-02;
  return {"M3(8,6,1)",
          Tableau(a, ahat,
                  vec({1.927179349665056e-01, 7.457643792836192e-02, 1.097549250079706e-01,
                       1.166274027628658e-01, 1.862061970475841e-01, 1.088089628270683e-01,
                       4.414821350738243e-02, 1.671599259522612e-01}),
                  bhat, Variant::M3, 1.0),
          6, 1.7369, MethodSource::Published};
}

}  // namespace methods_detail

/// Three-stage fourth-order M3 method optimized for Taylor-series ratio k.
/// For k >= 1 this is the fixed scheme with coefficient 1; below that the
/// coefficients are rational functions of k with coefficient 2k/(k+1).
inline Tableau family_m3_3_4(double k) {
  if (!(k > 0.0)) throw Error("family parameter K must be positive");
  if (k >= 1.0) return methods_detail::m3_3_4_1().tableau;
  const double kp1 = k + 1.0;
  const double kp2 = k + 2.0;
  const double km3 = k - 3.0;
  const double kp1_3 = kp1 * kp1 * kp1;
  const double kp2_3 = kp2 * kp2 * kp2;
  Matrix a = Matrix::Zero(3, 3);
  Matrix ahat = Matrix::Zero(3, 3);
  a(1, 0) = kp1 / 2.0;
  a(2, 0) = kp1 * (-k * k * k - 2.0 * k * k + 14.0 * k + 3.0) / (2.0 * kp2_3);
  a(2, 1) = kp1 * km3 * km3 / (2.0 * kp2_3);
  ahat(1, 0) = kp1 * kp1 / 8.0;
  const double q = -k * k + 2.0 * k + 3.0;
  ahat(2, 0) = k * q * q / (8.0 * kp2_3);
  Vector b(3);
  const double k2 = k * k;
  const double k3 = k2 * k;
  b[0] = (3.0 * k3 * k2 - 9.0 * k2 * k2 - 22.0 * k3 + 30.0 * k2 + 21.0 * k + 11.0) /
         (3.0 * km3 * km3 * kp1_3);
  b[1] = 2.0 * k / (3.0 * kp1_3);
  b[2] = 2.0 * kp2_3 / (3.0 * km3 * km3 * kp1_3);
  Vector bhat = Vector::Zero(3);
  bhat[0] = -(-3.0 * k3 + 3.0 * k2 + k + 1.0) / (6.0 * km3 * kp1 * kp1);
  return Tableau(a, ahat, b, bhat, Variant::M3, k);
}

inline std::string family_m3_3_4_name(double k) {
  std::ostringstream os;
  os << "M3(3,4," << k << ")";
  return os.str();
}

/// Every built-in method, in a fixed order.
inline const std::vector<MethodRecord>& registry() {
  static const std::vector<MethodRecord> records = [] {
    std::vector<MethodRecord> r{
        methods_detail::forward_euler(),   methods_detail::taylor_series(),
        methods_detail::m3_3_4_1(),        methods_detail::m2_4_4_inf(),
        methods_detail::two_stage_fourth_order(), methods_detail::m2_4_5_1(),
        methods_detail::m3_8_6_1(),
    };
    for (const auto& g : generated::methods()) {
      const int s = static_cast<int>(g.b.size());
      Matrix a = Matrix::Zero(s, s);
      Matrix ahat = Matrix::Zero(s, s);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          a(i, j) = g.A[static_cast<std::size_t>(i * s + j)];
          ahat(i, j) = g.Ahat[static_cast<std::size_t>(i * s + j)];
        }
      r.push_back({g.name,
                   Tableau(a, ahat, Eigen::Map<const Vector>(g.b.data(), s),
                           Eigen::Map<const Vector>(g.bhat.data(), s),
                           variant_from_string(g.variant), g.k),
                   g.order, g.cts, MethodSource::OptimizerGenerated});
    }
    return r;
  }();
  return records;
}

inline std::optional<MethodRecord> find_method(const std::string& name) {
  for (const auto& r : registry())
    if (r.name == name) return r;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

namespace methods_detail {

inline std::string format_number(double v) {
  if (std::isinf(v)) return "\"inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline double parse_k(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity") return kInfinity;
    throw FileFormatError("K_design must be a number or \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) throw FileFormatError("K_design must be a number or \"inf\"");
  return j.get<double>();
}

inline Vector parse_vector(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw FileFormatError(std::string("field '") + field + "' must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number())
      throw FileFormatError(std::string("field '") + field + "' has a non-numeric entry");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

inline Matrix parse_matrix(const nlohmann::json& j, const char* field, Eigen::Index s) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != s)
    throw FileFormatError(std::string("dimension mismatch: '") + field + "' must have " +
                          std::to_string(s) + " rows");
  Matrix m(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    const Vector row = parse_vector(j[static_cast<std::size_t>(i)], field);
    if (row.size() != s)
      throw FileFormatError(std::string("dimension mismatch: row ") + std::to_string(i + 1) +
                            " of '" + field + "' has " + std::to_string(row.size()) +
                            " entries, expected " + std::to_string(s));
    m.row(i) = row.transpose();
  }
  return m;
}

}  // namespace methods_detail

inline std::string to_json_text(const MethodRecord& rec) {
  using methods_detail::format_number;
  const Tableau& t = rec.tableau;
  const int s = t.stages();
  std::ostringstream os;
  auto write_matrix = [&](const Matrix& m) {
    os << "[\n";
    for (int i = 0; i < s; ++i) {
      os << "    [";
      for (int j = 0; j < s; ++j) os << (j ? ", " : "") << format_number(m(i, j));
      os << "]" << (i + 1 < s ? ",\n" : "\n");
    }
    os << "  ]";
  };
  auto write_vector = [&](const Vector& v) {
    os << "[";
    for (int j = 0; j < s; ++j) os << (j ? ", " : "") << format_number(v[j]);
    os << "]";
  };
  os << "{\n";
  os << "  \"name\": " << nlohmann::json(rec.name).dump() << ",\n";
  os << "  \"s\": " << s << ",\n";
  os << "  \"p_design\": " << rec.claimed_order << ",\n";
  os << "  \"K_design\": " << format_number(t.design_k()) << ",\n";
  os << "  \"variant\": \"" << to_string(t.variant()) << "\",\n";
  if (rec.claimed_cts) os << "  \"C_TS\": " << format_number(*rec.claimed_cts) << ",\n";
  os << "  \"A\": ";
  write_matrix(t.A());
  os << ",\n  \"Ahat\": ";
  write_matrix(t.Ahat());
  os << ",\n  \"b\": ";
  write_vector(t.b());
  os << ",\n  \"bhat\": ";
  write_vector(t.bhat());
  os << "\n}\n";
  return os.str();
}

inline MethodRecord from_json_text(const std::string& text, const std::string& origin = "") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FileFormatError("malformed tableau file " + origin + ": " + e.what());
  }
  if (!j.is_object()) throw FileFormatError("malformed tableau file " + origin + ": not an object");
  for (const char* field : {"s", "A", "Ahat", "b", "bhat"})
    if (!j.contains(field))
      throw FileFormatError("malformed tableau file " + origin + ": missing field '" + field + "'");
  if (!j["s"].is_number_integer()) throw FileFormatError("field 's' must be an integer");
  const auto s = j["s"].get<Eigen::Index>();
  if (s < 1 || s > kMaxStages)
    throw FileFormatError("stage count " + std::to_string(s) + " outside 1.." +
                          std::to_string(kMaxStages));
  const Vector b = methods_detail::parse_vector(j["b"], "b");
  const Vector bhat = methods_detail::parse_vector(j["bhat"], "bhat");
  if (b.size() != s || bhat.size() != s)
    throw FileFormatError("dimension mismatch: s = " + std::to_string(s) + " but b has " +
                          std::to_string(b.size()) + " entries and bhat has " +
                          std::to_string(bhat.size()));
  const Matrix a = methods_detail::parse_matrix(j["A"], "A", s);
  const Matrix ahat = methods_detail::parse_matrix(j["Ahat"], "Ahat", s);
  const double k = j.contains("K_design") ? methods_detail::parse_k(j["K_design"]) : kInfinity;
  Variant variant = Variant::External;
  if (j.contains("variant")) {
    try {
      variant = variant_from_string(j["variant"].get<std::string>());
    } catch (const std::exception& e) {
      throw FileFormatError(std::string("bad variant: ") + e.what());
    }
  }
  MethodRecord rec{j.value("name", origin.empty() ? std::string("external") : origin),
                   Tableau(a, ahat, b, bhat, variant, k), j.value("p_design", 0), std::nullopt,
                   MethodSource::ExternalFile};
  if (j.contains("C_TS") && j["C_TS"].is_number()) rec.claimed_cts = j["C_TS"].get<double>();
  const ValidationReport report = validate(rec.tableau);
  for (const auto& issue : report.issues)
    if (issue.kind != Diagnostic::Kind::StructureViolation)
      throw FileFormatError("invalid tableau in " + origin + ": " + issue.message);
  if (report.clamped_entries > 0) rec.tableau = clamp_roundoff(rec.tableau);
  return rec;
}

inline void save(const MethodRecord& rec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_json_text(rec);
  if (!out) throw Error("failed writing " + path.string());
}

inline MethodRecord load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open tableau file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), path.string());
}

/// Registry name, "M3(3,4,<k>)" family member, or path to a tableau file.
inline MethodRecord resolve_method(const std::string& ref) {
  if (auto rec = find_method(ref)) return *rec;
  const std::string prefix = "M3(3,4,";
  if (ref.rfind(prefix, 0) == 0 && ref.back() == ')') {
    const std::string arg = ref.substr(prefix.size(), ref.size() - prefix.size() - 1);
    try {
      std::size_t used = 0;
      const double k = std::stod(arg, &used);
      if (used == arg.size() && k > 0.0)
        return {ref, family_m3_3_4(k), 4, k >= 1.0 ? 1.0 : 2.0 * k / (k + 1.0),
                MethodSource::ClosedFormFamily};
    } catch (const std::logic_error&) {
    }
  }
  if (std::filesystem::exists(ref)) return load(ref);
  throw UnknownMethodError("unknown method '" + ref +
                           "': not a registry name and no such file");
}

}  // namespace mdrk
