#include "msk/verdict.hpp"

#include <algorithm>

namespace msk {

const char* to_string(Validity v) {
  switch (v) {
    case Validity::Identical: return "identical";
    case Validity::Generic: return "generic";
    case Validity::Sampled: return "sampled";
    case Validity::GenericAndSampled: return "generic+sampled";
  }
  return "identical";
}

Validity CheckMode::validity() const {
  if (generic && !samples.empty()) return Validity::GenericAndSampled;
  if (generic) return Validity::Generic;
  return Validity::Sampled;
}

Verdict Verdict::identity(std::string name, bool pass, std::string residual) {
  Verdict v;
  v.name = std::move(name);
  v.pass = pass;
  v.validity = Validity::Identical;
  if (!pass) v.residual = std::move(residual);
  return v;
}

namespace {

Validity combine(Validity a, Validity b) {
  auto has_generic = [](Validity v) { return v == Validity::Generic || v == Validity::GenericAndSampled; };
  auto has_sampled = [](Validity v) { return v == Validity::Sampled || v == Validity::GenericAndSampled; };
  bool g = has_generic(a) || has_generic(b);
  bool s = has_sampled(a) || has_sampled(b);
  if (g && s) return Validity::GenericAndSampled;
  if (g) return Validity::Generic;
  if (s) return Validity::Sampled;
  return Validity::Identical;
}

}  // namespace

Verdict Verdict::itemized(std::string name, std::vector<Verdict> items) {
  Verdict v;
  v.name = std::move(name);
  v.pass = std::all_of(items.begin(), items.end(), [](const Verdict& i) { return i.pass; });
  for (const auto& i : items) {
    v.validity = combine(v.validity, i.validity);
    for (const auto& l : i.locus)
      if (std::find(v.locus.begin(), v.locus.end(), l) == v.locus.end()) v.locus.push_back(l);
    if (v.points.empty()) v.points = i.points;
    if (!i.pass && v.residual.empty() && !i.residual.empty()) v.residual = i.name + ": " + i.residual;
  }
  std::sort(v.locus.begin(), v.locus.end());
  v.items = std::move(items);
  return v;
}

const Verdict* Verdict::item(const std::string& item_name) const {
  for (const auto& i : items)
    if (i.name == item_name) return &i;
  return nullptr;
}

std::string Verdict::render(int indent) const {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  std::string out = pad + (pass ? "PASS " : "FAIL ") + name + " [" + to_string(validity) + "]";
  if (!locus.empty()) {
    out += " off {";
    for (std::size_t i = 0; i < locus.size(); ++i) out += (i ? "; " : "") + locus[i] + " = 0";
    out += "}";
  }
  if (!points.empty()) out += " at " + std::to_string(points.size()) + " points";
  out += "\n";
  if (!detail.empty()) out += pad + "  " + detail + "\n";
  if (!pass && !residual.empty() && items.empty()) out += pad + "  residual: " + residual + "\n";
  for (const auto& i : items) out += i.render(indent + 2);
  return out;
}

Verdict injectivity_verdict(std::string name, const SymMatrix& m, const CheckMode& mode,
                            const std::function<std::string(const SymVector&)>& describe_kernel, Exec exec) {
  const std::size_t n = m.cols();
  std::vector<Verdict> items;
  if (mode.generic) {
    EchelonData e = rref(m);
    Verdict v;
    v.name = "generic";
    v.validity = Validity::Generic;
    v.pass = e.kernel_basis.empty();
    v.locus = format_loci(e.pivot_denominators);
    v.detail = "rank " + std::to_string(e.rank) + " of " + std::to_string(n);
    if (!v.pass) v.residual = "kernel contains " + describe_kernel(e.kernel_basis.front());
    items.push_back(std::move(v));
  }
  if (!mode.samples.empty()) {
    auto ranks = rank_at_points(m, mode.samples, exec);
    Verdict v;
    v.name = "sampled";
    v.validity = Validity::Sampled;
    v.points = mode.samples;
    v.pass = true;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (ranks[i] != n) {
        v.pass = false;
        v.residual = "rank " + std::to_string(ranks[i]) + " < " + std::to_string(n) + " at " + format_point(mode.samples[i]);
        break;
      }
    }
    v.detail = "full rank " + std::to_string(n) + " required at each point";
    items.push_back(std::move(v));
  }
  if (items.size() == 1) {
    Verdict single = std::move(items.front());
    single.name = std::move(name);
    return single;
  }
  return Verdict::itemized(std::move(name), std::move(items));
}

}  // namespace msk
