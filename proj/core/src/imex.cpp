#include "hemoflow/imex.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hemoflow/errors.hpp"

namespace hemoflow {

ImexTableau ImexTableau::ars443() {
  ImexTableau t;
  t.name = "ARS(4,4,3)";
  t.stages = 5;
  t.order = 3;
  t.A_ex = {{0, 0, 0, 0, 0},
            {1.0 / 2, 0, 0, 0, 0},
            {11.0 / 18, 1.0 / 18, 0, 0, 0},
            {5.0 / 6, -5.0 / 6, 1.0 / 2, 0, 0},
            {1.0 / 4, 7.0 / 4, 3.0 / 4, -7.0 / 4, 0}};
  t.b_ex = {1.0 / 4, 7.0 / 4, 3.0 / 4, -7.0 / 4, 0};
  t.c_ex = {0, 1.0 / 2, 2.0 / 3, 1.0 / 2, 1};
  t.A_im = {{0, 0, 0, 0, 0},
            {0, 1.0 / 2, 0, 0, 0},
            {0, 1.0 / 6, 1.0 / 2, 0, 0},
            {0, -1.0 / 2, 1.0 / 2, 1.0 / 2, 0},
            {0, 3.0 / 2, -3.0 / 2, 1.0 / 2, 1.0 / 2}};
  t.b_im = {0, 3.0 / 2, -3.0 / 2, 1.0 / 2, 1.0 / 2};
  t.c_im = {0, 1.0 / 2, 2.0 / 3, 1.0 / 2, 1};
  return t;
}

bool ImexTableau::globally_stiffly_accurate(double tol) const {
  for (int j = 0; j < stages; ++j) {
    if (std::abs(b_ex[j] - A_ex[stages - 1][j]) > tol)
      return false;
    if (std::abs(b_im[j] - A_im[stages - 1][j]) > tol)
      return false;
  }
  return true;
}

namespace {

void check_order(const std::vector<std::vector<double>> &A,
                 const std::vector<double> &b, const std::vector<double> &c,
                 int order, const char *label) {
  const int s = static_cast<int>(b.size());
  const double tol = 1e-12;
  double s1 = 0;
  for (double bi : b)
    s1 += bi;
  if (std::abs(s1 - 1.0) > tol)
    throw ConfigError(std::string("ImexTableau: ") + label +
                      " fails order-1 condition");
  if (order >= 2) {
    double s2 = 0;
    for (int i = 0; i < s; ++i)
      s2 += b[i] * c[i];
    if (std::abs(s2 - 0.5) > tol)
      throw ConfigError(std::string("ImexTableau: ") + label +
                        " fails order-2 condition");
  }
  if (order >= 3) {
    double s3 = 0, s4 = 0;
    for (int i = 0; i < s; ++i) {
      s3 += b[i] * c[i] * c[i];
      for (int j = 0; j < s; ++j)
        s4 += b[i] * A[i][j] * c[j];
    }
    if (std::abs(s3 - 1.0 / 3.0) > tol || std::abs(s4 - 1.0 / 6.0) > tol)
      throw ConfigError(std::string("ImexTableau: ") + label +
                        " fails order-3 condition");
  }
}

} // namespace

void ImexTableau::validate() const {
  if (stages < 2)
    throw ConfigError("ImexTableau: needs at least 2 stages");
  auto shape_ok = [&](const std::vector<std::vector<double>> &A) {
    if (static_cast<int>(A.size()) != stages)
      return false;
    for (const auto &row : A)
      if (static_cast<int>(row.size()) != stages)
        return false;
    return true;
  };
  if (!shape_ok(A_ex) || !shape_ok(A_im) ||
      static_cast<int>(b_ex.size()) != stages ||
      static_cast<int>(b_im.size()) != stages ||
      static_cast<int>(c_ex.size()) != stages ||
      static_cast<int>(c_im.size()) != stages)
    throw ConfigError("ImexTableau: inconsistent array shapes");

  for (int i = 0; i < stages; ++i)
    for (int j = i; j < stages; ++j)
      if (A_ex[i][j] != 0.0)
        throw ConfigError(
            "ImexTableau: explicit part must be strictly lower triangular");
  for (int i = 0; i < stages; ++i) {
    for (int j = i + 1; j < stages; ++j)
      if (A_im[i][j] != 0.0)
        throw ConfigError("ImexTableau: implicit part must be lower triangular");
    if (i >= 1 && A_im[i][i] == 0.0)
      throw ConfigError(
          "ImexTableau: implicit diagonal must be nonzero from stage 2");
  }
  if (A_im[0][0] != 0.0)
    throw ConfigError("ImexTableau: first implicit stage must be trivial");

  const double tol = 1e-12;
  for (int i = 0; i < stages; ++i) {
    double re = 0, ri = 0;
    for (int j = 0; j < stages; ++j) {
      re += A_ex[i][j];
      ri += A_im[i][j];
    }
    if (std::abs(re - c_ex[i]) > tol || std::abs(ri - c_im[i]) > tol)
      throw ConfigError("ImexTableau: row sums must equal the abscissae");
  }

  check_order(A_ex, b_ex, c_ex, order, "explicit part");
  check_order(A_im, b_im, c_im, order, "implicit part");

  if (!globally_stiffly_accurate())
    throw ConfigError("ImexTableau: not globally stiffly accurate");
}

ImexTableau ImexTableau::from_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("ImexTableau: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw ConfigError("ImexTableau: bad JSON in " + path + ": " + e.what());
  }
  ImexTableau t;
  try {
    t.name = j.value("name", "custom");
    t.stages = j.at("stages").get<int>();
    t.order = j.at("order").get<int>();
    t.A_ex = j.at("A_ex").get<std::vector<std::vector<double>>>();
    t.A_im = j.at("A_im").get<std::vector<std::vector<double>>>();
    t.b_ex = j.at("b_ex").get<std::vector<double>>();
    t.b_im = j.at("b_im").get<std::vector<double>>();
    t.c_ex = j.at("c_ex").get<std::vector<double>>();
    t.c_im = j.at("c_im").get<std::vector<double>>();
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("ImexTableau: missing field in " + path + ": " +
                      e.what());
  }
  t.validate();
  return t;
}

std::string ImexTableau::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["stages"] = stages;
  j["order"] = order;
  j["A_ex"] = A_ex;
  j["A_im"] = A_im;
  j["b_ex"] = b_ex;
  j["b_im"] = b_im;
  j["c_ex"] = c_ex;
  j["c_im"] = c_im;
  return j.dump(2);
}

} // namespace hemoflow
