#include "qbm/resources.hpp"

#include <bit>
#include <string>

#include <nlohmann/json.hpp>

#include "qbm/error.hpp"
#include "qbm/io.hpp"

namespace qbm {

void ArithParams::validate() const {
  if (word_bits < 2 || int_bits < 1 || int_bits >= word_bits) {
    throw Error(ErrorKind::InvalidFormat, "need 1 <= int_bits < word_bits and word_bits >= 2");
  }
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "degree must be >= 1");
  if (pieces < 1 || !std::has_single_bit(static_cast<unsigned>(pieces))) {
    throw Error(ErrorKind::InvalidArgument, "pieces must be a power of two");
  }
}

int floor_log2_ratio(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0) throw Error(ErrorKind::InvalidArgument, "log2 of a non-positive ratio");
  int k = 0;
  if (num >= den) {
    while (num >= (den << (k + 1))) ++k;  // largest k with den 2^k <= num
    return k;
  }
  while ((num << k) < den) ++k;  // smallest k with num 2^k >= den
  return -k;
}

int ceil_log2(std::int64_t x) {
  if (x <= 0) throw Error(ErrorKind::InvalidArgument, "log2 of a non-positive value");
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(x - 1)));
}

std::int64_t tcount_mul(int n, int p) {
  const std::int64_t N = n, P = p;
  // 3/2 n^2 + 3np + 3/2 n - 3p^2 + 3p; n^2 + n is even, so this is exact.
  return (3 * N * N + 6 * N * P + 3 * N - 6 * P * P + 6 * P) / 2;
}

std::int64_t tdepth_add(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "addition depth needs n >= 2");
  return floor_log2_ratio(n, 1) + floor_log2_ratio(n - 1, 1) + floor_log2_ratio(n, 3) +
         floor_log2_ratio(n - 1, 3) + 8;
}

std::int64_t tdepth_mul(int n, int /*p*/) { return static_cast<std::int64_t>(n) * (tdepth_add(n) + 6); }

std::int64_t tcount_poly(const ArithParams& a) {
  a.validate();
  const std::int64_t n = a.word_bits, p = a.int_bits, d = a.degree, M = a.pieces;
  // Doubled to keep the half-integer coefficients exact.
  const std::int64_t twice = 3 * n * n * d + 6 * n * p * d + 7 * n * d - 6 * p * p * d + 6 * p * d - 2 * d;
  return twice / 2 + 2 * M * d * (4 * ceil_log2(M) - 8) + 4 * M * n;
}

std::int64_t tdepth_poly(const ArithParams& a) {
  a.validate();
  const std::int64_t n = a.word_bits;
  return a.degree * (tdepth_mul(a.word_bits, a.int_bits) + tdepth_add(a.word_bits)) +
         static_cast<std::int64_t>(a.pieces) * (2 * floor_log2_ratio(n - 1, 1) + 5);
}

std::int64_t qubit_count(const ArithParams& a) {
  a.validate();
  return 6 * static_cast<std::int64_t>(a.word_bits) + 3 * (ceil_log2(a.pieces) + 1);
}

ResourceMode resource_mode_from_string(std::string_view name) {
  if (name == "paper_fit") return ResourceMode::PaperFit;
  if (name == "compositional") return ResourceMode::Compositional;
  throw Error(ErrorKind::InvalidArgument, "unknown resource mode '" + std::string(name) + "'");
}

std::string_view to_string(ResourceMode mode) noexcept {
  return mode == ResourceMode::PaperFit ? "paper_fit" : "compositional";
}

ResourceEstimate boxmuller_resources(const ArithParams& a, ResourceMode mode, bool serial) {
  a.validate();
  const std::int64_t poly_t = tcount_poly(a);
  const std::int64_t poly_d = tdepth_poly(a);
  const std::int64_t mul_t = tcount_mul(a.word_bits, a.int_bits);
  const std::int64_t mul_d = tdepth_mul(a.word_bits, a.int_bits);

  ResourceEstimate e;
  e.mode = mode;
  e.qubits = qubit_count(a);
  if (mode == ResourceMode::PaperFit) {
    e.t_count = 3 * poly_t + 5 * mul_t;
    e.t_depth = serial ? 4 * poly_d + 6 * mul_d : poly_d;
    return e;
  }
  e.breakdown = {
      {"sin", poly_t, poly_d},
      {"cos", poly_t, poly_d},
      {"log", poly_t + 2 * mul_t, poly_d + 2 * mul_d},
      {"sqrt", poly_t + 2 * mul_t, poly_d + 2 * mul_d},
      {"final_products", 2 * mul_t, 2 * mul_d},
  };
  for (const auto& item : e.breakdown) e.t_count += item.t_count;
  e.t_depth = serial ? 4 * poly_d + 6 * mul_d : poly_d;
  return e;
}

const std::vector<PublishedRow>& published_table2() {
  static const std::vector<PublishedRow> rows{
      {10, 2.797e-2, 1.408e-2, 78, 8193, 588},   {11, 1.634e-2, 4.735e-3, 84, 8942, 610},
      {12, 9.761e-3, 3.711e-3, 90, 9717, 645},   {13, 6.042e-3, 1.438e-3, 96, 10515, 682},
      {14, 3.897e-3, 9.814e-4, 102, 11337, 706}, {15, 2.122e-3, 4.876e-4, 108, 12183, 730},
      {16, 1.320e-3, 2.290e-4, 114, 13053, 771}, {17, 9.913e-4, 1.327e-4, 120, 13947, 878},
      {18, 7.373e-4, 6.866e-5, 126, 14865, 904}, {19, 6.283e-4, 4.550e-5, 132, 15807, 930},
  };
  return rows;
}

std::optional<PublishedRow> published_row(int n) {
  for (const auto& r : published_table2()) {
    if (r.n == n) return r;
  }
  return std::nullopt;
}

std::vector<Table2Row> table2(ResourceMode mode, bool serial) {
  std::vector<Table2Row> rows;
  for (const auto& pub : published_table2()) {
    rows.push_back({pub.n, boxmuller_resources({pub.n, 4, 1, 32}, mode, serial), pub});
  }
  return rows;
}

void write_table2_csv(std::ostream& out, const std::vector<Table2Row>& rows) {
  io::CsvWriter w(out);
  w.header({"n", "t_count", "t_count_published", "t_depth", "t_depth_published", "qubits", "qubits_published"});
  for (const auto& r : rows) {
    w.field(r.n)
        .field(r.estimate.t_count)
        .field(r.published.t_count)
        .field(r.estimate.t_depth)
        .field(r.published.t_depth)
        .field(r.estimate.qubits)
        .field(r.published.qubits);
    w.end_row();
  }
}

nlohmann::json table2_to_json(const std::vector<Table2Row>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"n", r.n},
                       {"mode", to_string(r.estimate.mode)},
                       {"t_count", r.estimate.t_count},
                       {"t_count_published", r.published.t_count},
                       {"t_depth", r.estimate.t_depth},
                       {"t_depth_published", r.published.t_depth},
                       {"qubits", r.estimate.qubits},
                       {"qubits_published", r.published.qubits}};
    if (!r.estimate.breakdown.empty()) {
      nlohmann::json items = nlohmann::json::array();
      for (const auto& it : r.estimate.breakdown) {
        items.push_back({{"component", it.component}, {"t_count", it.t_count}, {"t_depth", it.t_depth}});
      }
      row["breakdown"] = std::move(items);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace qbm
