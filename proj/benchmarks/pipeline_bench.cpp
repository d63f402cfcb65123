#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "ringscore/arrow.hpp"
#include "ringscore/ellipse.hpp"
#include "ringscore/imgproc.hpp"
#include "ringscore/scoring.hpp"
#include "ringscore/synth.hpp"

namespace {

using namespace ringscore;

const RgbImage& face(int width, int height) {
  static std::vector<std::pair<int, RgbImage>> cache;
  for (const auto& [w, image] : cache) {
    if (w == width) return image;
  }
  TargetSpec spec = default_face({width / 2.0, height / 2.0}, height * 0.4);
  spec.noise_sigma = 4.0;
  cache.emplace_back(width, render_target(spec, width, height, 7));
  return cache.back().second;
}

void BM_Canny(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const GrayImage gray = to_gray(face(w, w * 3 / 4));
  for (auto _ : state) benchmark::DoNotOptimize(canny(gray, 50, 150));
  state.SetItemsProcessed(state.iterations() * gray.width() * gray.height());
}
BENCHMARK(BM_Canny)->Arg(640)->Arg(1280)->Unit(benchmark::kMillisecond);

void BM_Bilateral(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const GrayImage gray = to_gray(face(w, w * 3 / 4));
  for (auto _ : state) benchmark::DoNotOptimize(bilateral_smooth(gray, 3.0, 25.0));
  state.SetItemsProcessed(state.iterations() * gray.width() * gray.height());
}
BENCHMARK(BM_Bilateral)->Arg(640)->Arg(1280)->Unit(benchmark::kMillisecond);

void BM_VerticalOpening(benchmark::State& state) {
  const RgbImage& image = face(1280, 960);
  const BitMask mask = threshold(abs_diff_rgb(image, add_noise(image, 8.0, 3)), 40);
  const auto se = StructuringElement::vertical(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(opening(mask, se));
}
BENCHMARK(BM_VerticalOpening)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_FitEllipse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Vec2> points;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    points.push_back({300.0 + 120.0 * std::cos(t), 200.0 + 70.0 * std::sin(t)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_ellipse(points));
}
BENCHMARK(BM_FitEllipse)->Arg(40)->Arg(2500);

void BM_DetectArrow(benchmark::State& state) {
  TargetSpec spec = default_face();
  const RgbImage before = render_clean(std::span(&spec, 1), 1280, 960);
  ShotSpec shot;
  shot.true_tip = {700.0, 530.0};
  const RgbImage after = render_shot(before, spec, shot);
  const TargetModel target = detect_target(before, spec.center, DetectionParams{});
  for (auto _ : state) benchmark::DoNotOptimize(detect_arrow(before, after, target, ArrowParams{}));
}
BENCHMARK(BM_DetectArrow)->Unit(benchmark::kMillisecond);

void BM_ScorePoint(benchmark::State& state) {
  TargetSpec spec = default_face();
  const TargetModel target = detect_target(render_clean(std::span(&spec, 1), 1280, 960), spec.center, DetectionParams{});
  double x = 300.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_point(target, {x, 480.0}));
    x = x > 980.0 ? 300.0 : x + 0.37;
  }
}
BENCHMARK(BM_ScorePoint);

}  // namespace
BENCHMARK_MAIN();
