#pragma once

#include <functional>
#include <string>
#include <vector>

#include "msk/linalg.hpp"

namespace msk {

/// How far a verdict's claim reaches. Identical: an exact identity of functions. Generic: holds off
/// the listed denominator loci. Sampled: checked exactly at the listed points only.
enum class Validity { Identical, Generic, Sampled, GenericAndSampled };

const char* to_string(Validity v);

/// Which of the generic and pointwise semantics a rank-type check should use.
struct CheckMode {
  bool generic = true;
  std::vector<SamplePoint> samples;

  static CheckMode generic_only() { return {true, {}}; }
  static CheckMode sampled(std::vector<SamplePoint> pts) { return {false, std::move(pts)}; }
  static CheckMode both(std::vector<SamplePoint> pts) { return {true, std::move(pts)}; }

  Validity validity() const;
};

struct Verdict {
  std::string name;
  bool pass = false;
  Validity validity = Validity::Identical;
  std::vector<std::string> locus;
  std::vector<SamplePoint> points;
  std::string residual;
  std::string detail;
  std::vector<Verdict> items;

  static Verdict identity(std::string name, bool pass, std::string residual = {});
  /// pass iff every item passes; validity and loci are merged from the items.
  static Verdict itemized(std::string name, std::vector<Verdict> items);

  const Verdict* item(const std::string& item_name) const;
  explicit operator bool() const { return pass; }

  /// Multi-line human-readable rendering.
  std::string render(int indent = 0) const;
};

/// Injectivity of m (trivial kernel) under the mode's generic and pointwise semantics. A single
/// requested semantics is returned flat; both give an itemized verdict with "generic" and "sampled".
Verdict injectivity_verdict(std::string name, const SymMatrix& m, const CheckMode& mode,
                            const std::function<std::string(const SymVector&)>& describe_kernel,
                            Exec exec = Exec::Parallel);

}  // namespace msk
