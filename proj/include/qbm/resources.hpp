#pragma once

// Closed-form T-count / T-depth / qubit estimates for the fixed-point
// Box-Muller circuit, and the published resource table for comparison.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace qbm {

struct ArithParams {
  int word_bits = 10;  // n
  int int_bits = 4;    // p
  int degree = 1;      // d
  int pieces = 32;     // M

  void validate() const;
};

// floor(log2(num / den)) for positive integers, exact (negative values too).
int floor_log2_ratio(std::int64_t num, std::int64_t den);
int ceil_log2(std::int64_t x);

std::int64_t tcount_mul(int n, int p);
std::int64_t tdepth_add(int n);
std::int64_t tdepth_mul(int n, int p);
std::int64_t tcount_poly(const ArithParams& a);
std::int64_t tdepth_poly(const ArithParams& a);
std::int64_t qubit_count(const ArithParams& a);

// paper_fit: 3 polynomial evaluations + 5 multiplications, depth of one
// polynomial evaluation. compositional: sin, cos, log (poly + 2 mul), sqrt
// (poly + 2 mul) and the 2 final products, itemised.
enum class ResourceMode { PaperFit, Compositional };

ResourceMode resource_mode_from_string(std::string_view name);
std::string_view to_string(ResourceMode mode) noexcept;

struct ResourceItem {
  std::string component;
  std::int64_t t_count;
  std::int64_t t_depth;
};

struct ResourceEstimate {
  std::int64_t t_count = 0;
  std::int64_t t_depth = 0;
  std::int64_t qubits = 0;
  ResourceMode mode = ResourceMode::PaperFit;
  std::vector<ResourceItem> breakdown;  // compositional mode only
};

// serial: depth summed over the compositional pipeline instead of the
// single-evaluation depth.
ResourceEstimate boxmuller_resources(const ArithParams& a, ResourceMode mode, bool serial = false);

struct PublishedRow {
  int n;
  double exp_error;
  double quantile_error;
  std::int64_t qubits;
  std::int64_t t_count;
  std::int64_t t_depth;
};

// n = 10..19 at p = 4, d = 1, M = 32.
const std::vector<PublishedRow>& published_table2();
std::optional<PublishedRow> published_row(int n);

struct Table2Row {
  int n;
  ResourceEstimate estimate;
  PublishedRow published;
};

std::vector<Table2Row> table2(ResourceMode mode, bool serial = false);

void write_table2_csv(std::ostream& out, const std::vector<Table2Row>& rows);
nlohmann::json table2_to_json(const std::vector<Table2Row>& rows);

}  // namespace qbm
