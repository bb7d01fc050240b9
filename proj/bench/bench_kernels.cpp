#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "msk/catalog.hpp"
#include "msk/sampling.hpp"

using namespace msk;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() / reps;
}

template <class Result>
void row(const char* kernel, int reps, const std::function<Result(Exec)>& run) {
  Result serial{}, parallel{};
  double ts = time_ms([&] { serial = run(Exec::Serial); }, reps);
  double tp = time_ms([&] { parallel = run(Exec::Parallel); }, reps);
  std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", kernel, ts, tp, ts / tp, serial == parallel ? "same" : "DIFFERENT");
}

std::string render(const Verdict& v) { return v.render(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial versus OpenMP timings of the checking kernels"};
  int reps = 3;
  std::size_t points = 200;
  app.add_option("--reps", reps, "Repetitions per measurement")->check(CLI::PositiveNumber);
  app.add_option("--points", points, "Sample points for the rank kernel");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", max_threads());
  std::printf("%-22s %10s %10s %9s  %s\n", "kernel", "serial ms", "omp ms", "speedup", "results");

  auto chart = make_chart("R4", {"x1", "x2", "x3", "x4"});
  std::mt19937_64 rng(42);
  SymMatrix m(8, 8);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) m(r, c) = RationalFunction(random_polynomial(chart, rng, 3, 3));
  auto pts = draw_points(chart, 7, points, 10);
  row<std::vector<std::size_t>>("rank_at_points", reps, [&](Exec e) { return rank_at_points(m, pts, e); });

  auto cm = canonical_multiphase(3, 2);
  auto graph = graph_frame(cm.omega);
  auto family = scaled_family(make_chart("N", {"t1", "t2"}), RationalFunction::variable(make_chart("N", {"t1", "t2"}), 0), cm.omega);
  row<std::string>("is_involutive graph", reps, [&](Exec e) { return render(is_involutive(graph, e)); });
  row<std::string>("is_involutive family", reps, [&](Exec e) { return render(is_involutive(family, e)); });

  auto dl = to_dl(graph);
  auto mode = CheckMode::both(draw_points(graph.chart, 3, 20, 10));
  row<std::string>("check_dl", reps, [&](Exec e) { return render(check_dl(dl, mode, e)); });

  auto so3 = make_chart("so3*", {"x1", "x2", "x3"});
  auto pi = parse_multivector("x1*e(x2)^e(x3) + x2*e(x3)^e(x1) + x3*e(x1)^e(x2)", so3, 2);
  auto cot = cotangent_algebroid(pi);
  row<std::string>("algebroid jacobi", reps, [&](Exec e) { return render(check_algebroid_axioms(cot, 1, e)); });
  return 0;
}
