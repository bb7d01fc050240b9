#include "msk/chart.hpp"

#include <algorithm>
#include <set>

#include "msk/error.hpp"

namespace msk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::UnknownCoordinate: return "UnknownCoordinate";
    case ErrorKind::PoleAtPoint: return "PoleAtPoint";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::DegreeUnderflow: return "DegreeUnderflow";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NotHamiltonian: return "NotHamiltonian";
    case ErrorKind::NotInD: return "NotInD";
    case ErrorKind::ProjectionNotInjective: return "ProjectionNotInjective";
    case ErrorKind::PointNotOnLeafSpan: return "PointNotOnLeafSpan";
    case ErrorKind::MissingUnitComplement: return "MissingUnitComplement";
    case ErrorKind::MissingRightExtension: return "MissingRightExtension";
    case ErrorKind::ComplementNotInKernel: return "ComplementNotInKernel";
    case ErrorKind::NonConstantFrame: return "NonConstantFrame";
    case ErrorKind::BadDegree: return "BadDegree";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::JacobiFails: return "JacobiFails";
    case ErrorKind::PairingNotInvariant: return "PairingNotInvariant";
    case ErrorKind::UnknownCatalogName: return "UnknownCatalogName";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::ScenarioError: return "ScenarioError";
  }
  return "Error";
}

Chart::Chart(std::string name, std::vector<std::string> coords)
    : name_(std::move(name)), coords_(std::move(coords)) {
  std::set<std::string> seen;
  for (const auto& c : coords_) {
    if (!seen.insert(c).second)
      throw Error(ErrorKind::BadParameters, "duplicate coordinate '" + c + "' in chart " + name_);
  }
}

std::optional<std::size_t> Chart::find(const std::string& coord) const {
  auto it = std::find(coords_.begin(), coords_.end(), coord);
  if (it == coords_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - coords_.begin());
}

std::size_t Chart::index_of(const std::string& coord) const {
  auto idx = find(coord);
  if (!idx) throw Error(ErrorKind::UnknownCoordinate, "'" + coord + "' is not a coordinate of " + name_);
  return *idx;
}

ChartPtr make_chart(std::string name, std::vector<std::string> coords) {
  return std::make_shared<const Chart>(std::move(name), std::move(coords));
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->coords() == b->coords();
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* context) {
  if (!same_chart(a, b)) {
    std::string an = a ? a->name() : "<none>";
    std::string bn = b ? b->name() : "<none>";
    throw Error(ErrorKind::ChartMismatch, std::string(context) + ": charts " + an + " and " + bn);
  }
}

ChartPtr product_chart(const ChartPtr& a, const ChartPtr& b, std::string name) {
  std::vector<std::string> coords = a->coords();
  coords.insert(coords.end(), b->coords().begin(), b->coords().end());
  if (name.empty()) name = a->name() + "x" + b->name();
  return make_chart(std::move(name), std::move(coords));
}

}  // namespace msk
