#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "nl4s/config.hpp"
#include "nl4s/error.hpp"
#include "nl4s/experiments.hpp"
#include "nl4s/manifest.hpp"
#include "nl4s/snapshot_io.hpp"
#include "support.hpp"

using namespace nl4s;
using namespace nl4s::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nl4s_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_bytes(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string load_error(const fs::path& p) {
  try {
    snapshot_load(p);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("snapshot round trip is bit identical") {
  const auto dir = scratch_dir("snap");
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 64 : 16, 3.5);
    const auto u = white_noise(g, 11);
    const auto path = dir / ("u" + std::to_string(dim) + ".nl4s");
    snapshot_save(u, path, {0.25, 1.5, 16.0});
    const auto s = snapshot_load(path);
    CHECK(s.field.grid() == g);
    CHECK(s.meta.time == 0.25);
    CHECK(s.meta.gamma == 1.5);
    CHECK(s.meta.N == 16.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::memcmp(&s.field.values()[i], &u.values()[i], sizeof(Complex)) == 0);
    }
    CHECK(fs::file_size(path) == kSnapshotHeaderBytes + g.size() * 16);
    const auto path2 = dir / "again.nl4s";
    snapshot_save(s.field, path2, s.meta);
    CHECK(read_bytes(path) == read_bytes(path2));
  }
  fs::remove_all(dir);
}

TEST_CASE("snapshot loader rejects corrupt files") {
  const auto dir = scratch_dir("bad");
  const GridSpec g(1, 32, 2.0);
  const auto good = dir / "good.nl4s";
  snapshot_save(smooth_random(g, 2), good);
  const auto bytes = read_bytes(good);

  auto magic = bytes;
  magic[2] ^= 0x20;
  write_bytes(dir / "m.nl4s", magic);
  CHECK(contains(load_error(dir / "m.nl4s"), "bad magic at byte offset 2"));

  auto version = bytes;
  version[4] = 9;
  write_bytes(dir / "v.nl4s", version);
  CHECK(contains(load_error(dir / "v.nl4s"), "version mismatch"));

  write_bytes(dir / "t.nl4s", bytes.substr(0, bytes.size() - 5));
  const auto t = load_error(dir / "t.nl4s");
  CHECK(contains(t, "expected " + std::to_string(32 * 16) + " bytes"));
  CHECK(contains(t, "got " + std::to_string(32 * 16 - 5)));

  write_bytes(dir / "p.nl4s", bytes + "xyz");
  CHECK(contains(load_error(dir / "p.nl4s"), "payload length mismatch"));

  write_bytes(dir / "h.nl4s", bytes.substr(0, 10));
  CHECK(contains(load_error(dir / "h.nl4s"), "truncated header"));

  auto nan = bytes;
  const double q = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(nan.data() + kSnapshotHeaderBytes + 3 * 16 + 8, &q, 8);
  write_bytes(dir / "n.nl4s", nan);
  CHECK(contains(load_error(dir / "n.nl4s"), "non-finite sample at index 3"));

  CHECK_THROWS(snapshot_load(dir / "missing.nl4s"));
  fs::remove_all(dir);
}

TEST_CASE("config JSON round trip, overrides and unknown keys") {
  RunConfig c;
  c.kind = ExperimentKind::almost_conservation;
  c.n = 512;
  c.gamma = 1.7;
  c.d_ana = 3;
  c.N = 12.0;
  c.N_list = {4, 8};
  c.initial.recipe = "gaussian";
  c.initial.width = 2.5;
  c.seed = 99;
  const auto j = to_json(c);
  const auto back = config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.kind == ExperimentKind::almost_conservation);
  CHECK(*back.d_ana == 3);
  CHECK(back.initial.width == 2.5);

  auto j2 = j;
  apply_override(j2, "evolve.dt0", "0.002");
  apply_override(j2, "initial.recipe", "file");
  apply_override(j2, "analysis.N_list", "[1, 2, 3]");
  const auto o = config_from_json(j2);
  CHECK(o.dt0 == 0.002);
  CHECK(o.initial.recipe == "file");
  CHECK(o.N_list == std::vector<double>{1, 2, 3});

  auto bad = j;
  bad["grid"]["nn"] = 3;
  CHECK_THROWS_AS(config_from_json(bad), FormatError);
  try {
    config_from_json(bad);
  } catch (const FormatError& e) {
    CHECK(contains(e.what(), "nn"));
  }

  CHECK(parse_experiment_kind("blowup-concentration") == ExperimentKind::blowup_concentration);
  CHECK_THROWS(parse_experiment_kind("nope"));
  for (auto k : all_experiment_kinds()) CHECK(parse_experiment_kind(to_string(k)) == k);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.kind = ExperimentKind::gwp_below_threshold;
  c.d_ana = 5;
  c.gamma = 1.9;
  CHECK(validate_config(c).ok());

  c.gamma = 2.5;
  CHECK_FALSE(validate_config(c).ok());

  c.kind = ExperimentKind::blowup_concentration;
  c.gamma = 1.8;
  const auto r = validate_config(c);
  CHECK(r.ok());
  bool mentions = false;
  for (const auto& a : r.advisories) mentions = mentions || contains(a, "1.952");
  CHECK(mentions);

  RunConfig ac;
  ac.kind = ExperimentKind::almost_conservation;
  ac.n = 64;
  ac.half_width = 20.0;  // nyquist/2 = 2.51
  ac.N_list = {1, 4};
  const auto e = validate_config(ac);
  REQUIRE_FALSE(e.ok());
  CHECK(contains(e.errors.front(), "nyquist/2"));
}

TEST_CASE("manifest is reproducible and verify detects tampering") {
  const auto dir = scratch_dir("manifest");
  RunConfig c;
  c.kind = ExperimentKind::evolve;
  c.n = 128;
  c.initial.recipe = "gaussian";
  c.initial.amplitude = 0.5;
  c.T_max = 0.01;
  c.snapshot_interval = 0.005;
  c.output_dir = (dir / "run").string();
  const auto m1 = run_experiment(c);
  CHECK(m1.passed());
  const auto j1 = strip_timestamps(m1.to_json());
  const auto m2 = run_experiment(c);
  const auto j2 = strip_timestamps(m2.to_json());
  CHECK(j1 == j2);
  CHECK_FALSE(m1.artifacts.empty());

  const auto manifest = dir / "run" / "manifest.json";
  auto ok = verify_manifest(manifest);
  CHECK(ok.ok);
  CHECK(ok.checked == m2.artifacts.size());

  const auto victim = dir / "run" / m2.artifacts.front().path;
  auto bytes = read_bytes(victim);
  bytes.back() ^= 1;
  write_bytes(victim, bytes);
  const auto bad = verify_manifest(manifest);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.problems.size() == 1);
  CHECK(contains(bad.problems.front(), m2.artifacts.front().path));
  fs::remove_all(dir);
}

TEST_CASE("sha256 of a known string") {
  const auto dir = scratch_dir("sha");
  write_bytes(dir / "abc", "abc");
  CHECK(sha256_hex(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::remove_all(dir);
}

TEST_CASE("profile alignment matches an exhaustive search") {
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 64 : 16, 4.0);
    const auto Q = smooth_random(g, 21);
    const auto psi = Complex(std::polar(1.0, 0.7)) * (smooth_random(g, 22) + Q);
    const auto a = align_to_profile(psi, Q);

    double best = INFINITY;
    const long n = static_cast<long>(g.n());
    const long sy = dim == 2 ? n : 1;
    for (long s0 = 0; s0 < n; ++s0) {
      for (long s1 = 0; s1 < sy; ++s1) {
        ProfileAlignment trial;
        trial.shift[0] = s0;
        trial.shift[1] = s1;
        const auto shifted = apply_alignment(psi, trial);
        Complex ip = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) ip += std::conj(shifted[i]) * Q[i];
        trial.phase = std::arg(ip);
        best = std::min(best, l2_norm(apply_alignment(psi, trial) - Q));
      }
    }
    CHECK(a.distance == doctest::Approx(best).epsilon(1e-10));
    CHECK(l2_norm(apply_alignment(psi, a) - Q) == doctest::Approx(a.distance).epsilon(1e-10));
  }
}

TEST_CASE("spectral resample: identity and exact grid shifts") {
  const GridSpec g(1, 64, 6.0);
  const auto v = smooth_random(g, 5);
  const double zero[1] = {0.0};
  CHECK(rel_l2(spectral_resample(v, 1.0, zero).values(), v.values()) < 1e-12);
  const double c[1] = {3 * g.dx()};
  const auto w = spectral_resample(v, 1.0, c);
  for (std::size_t j = 0; j < g.n(); ++j) CHECK(std::abs(w[j] - v[(j + 3) % g.n()]) < 1e-12);
  // Band-limited data is reproduced exactly at off-grid points.
  const double xi = g.frequency(5);
  const auto pw = sample(g, [&](auto x) { return std::polar(1.0, xi * x[0]); });
  const double off[1] = {0.123};
  const auto r = spectral_resample(pw, 1.0, off);
  for (std::size_t j = 0; j < g.n(); ++j) {
    CHECK(std::abs(r[j] - std::polar(1.0, xi * (g.coordinate(j) + 0.123))) < 1e-12);
  }
}
