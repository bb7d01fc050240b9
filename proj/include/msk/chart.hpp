#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace msk {

/// A coordinate chart: an ordered list of unique coordinate names.
/// Polynomials, forms and multivector fields all live on one chart.
class Chart {
 public:
  Chart(std::string name, std::vector<std::string> coords);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }

  std::optional<std::size_t> find(const std::string& coord) const;
  std::size_t index_of(const std::string& coord) const;  // throws UnknownCoordinate

 private:
  std::string name_;
  std::vector<std::string> coords_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::string name, std::vector<std::string> coords);

/// Two charts are interchangeable when they list the same coordinates in the same order.
bool same_chart(const ChartPtr& a, const ChartPtr& b);

/// Throws ChartMismatch unless same_chart(a, b).
void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* context);

/// Chart on a product; coordinate names must be disjoint.
ChartPtr product_chart(const ChartPtr& a, const ChartPtr& b, std::string name = {});

}  // namespace msk
