#include "msk/sampling.hpp"

#include "msk/error.hpp"

namespace msk {

std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t index) {
  std::uint64_t z = global_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// std::uniform_int_distribution is implementation-defined; this keeps draws reproducible.
long uniform(std::mt19937_64& rng, long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng() % span);
}

}  // namespace

Rational random_rational(std::mt19937_64& rng, long box) {
  Rational r(uniform(rng, -box, box), uniform(rng, 1, 64));
  r.canonicalize();
  return r;
}

std::vector<SamplePoint> draw_points(const ChartPtr& chart, std::uint64_t seed, std::size_t count, long box,
                                     const std::vector<Polynomial>& avoid) {
  constexpr int kMaxRetries = 100;
  std::mt19937_64 rng(seed);
  std::vector<SamplePoint> pts;
  for (std::size_t n = 0; n < count; ++n) {
    bool ok = false;
    for (int attempt = 0; attempt < kMaxRetries && !ok; ++attempt) {
      SamplePoint pt;
      std::vector<Rational> values;
      for (const auto& name : chart->coords()) {
        Rational v = random_rational(rng, box);
        pt.emplace(name, v);
        values.push_back(v);
      }
      ok = true;
      for (const auto& p : avoid) {
        if (p.with_chart(chart).evaluate(values) == 0) {
          ok = false;
          break;
        }
      }
      if (ok) pts.push_back(std::move(pt));
    }
    if (!ok) throw Error(ErrorKind::BadParameters, "could not draw a sample point off the denominator loci");
  }
  return pts;
}

Polynomial random_polynomial(const ChartPtr& chart, std::mt19937_64& rng, unsigned max_degree, unsigned max_terms,
                             long coeff_bound) {
  Polynomial p = Polynomial::constant(chart, 0);
  const long terms = uniform(rng, 1, static_cast<long>(max_terms));
  for (long t = 0; t < terms; ++t) {
    Exponent e(chart->dim(), 0);
    const long deg = uniform(rng, 0, static_cast<long>(max_degree));
    for (long d = 0; d < deg && chart->dim() > 0; ++d) ++e[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(chart->dim()) - 1))];
    p = p + Polynomial::monomial(chart, e, Rational(uniform(rng, -coeff_bound, coeff_bound)));
  }
  return p;
}

}  // namespace msk
