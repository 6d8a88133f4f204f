#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "maglat/atomic_data.hpp"
#include "maglat/config.hpp"
#include "maglat/errors.hpp"
#include "oracle_utils.hpp"

using namespace maglat;

namespace {
std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}
}  // namespace

TEST_CASE("key-value parser: comments, dotted keys, groups") {
  const auto cfg = KeyValueConfig::parse_string(
      "# comment\n"
      "a = 1.5\n"
      "\n"
      "line.D1.f = 2e3  # trailing comment\n"
      "line.D2.f = 3e3\n"
      "flag = true\n",
      "inline");
  CHECK(cfg.get_number("a") == 1.5);
  CHECK(cfg.get_number("line.D1.f") == 2e3);
  CHECK(cfg.get_bool("flag", false));
  CHECK(cfg.get_bool("absent", true));
  const auto groups = cfg.group_names("line");
  REQUIRE(groups.size() == 2);
  CHECK(groups[0] == "D1");
  CHECK(groups[1] == "D2");
}

TEST_CASE("key-value parser: error cases name the key") {
  CHECK_THROWS_AS(KeyValueConfig::parse_string("a = 1\na = 2\n", "x"),
                  ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse_string("novalue\n", "x"), ConfigError);
  const auto cfg = KeyValueConfig::parse_string("a = oops\n", "x");
  CHECK_THROWS_WITH_AS(cfg.get_number("a"),
                       doctest::Contains("key 'a'"),
                       ConfigError);
  CHECK_THROWS_AS(cfg.get_number("missing"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse_file("/nonexistent/path.cfg"),
                  ConfigError);
}

TEST_CASE("species file loads with full line data") {
  const SpeciesData s = load_species(oracle::data_path("species_rb87.cfg"));
  CHECK(s.name == "Rb87");
  CHECK(s.nuclear_spin == 1.5);
  CHECK(s.hyperfine_splitting_hz == doctest::Approx(6.834682610904e9));
  REQUIRE(s.lines.size() == 2);
  CHECK(s.line("D1").excited_hyperfine.size() == 2);
  CHECK(s.line("D2").excited_hyperfine.size() == 4);
  CHECK(s.line("D2").excited_J == 1.5);
  CHECK_THROWS_AS(s.line("D3"), InvariantError);
}

TEST_CASE("lattice and sample files load and validate") {
  const LatticeConfig lat = load_lattice(oracle::data_path("lattice_1064.cfg"));
  CHECK(lat.wavelength_nm == 1063.8);
  CHECK(lat.trap_depth_uK == 64.0);
  CHECK(lat.circ_degree_A == 0.991);
  CHECK(lat.include_counter_rotating);
  const SampleConfig smp = load_sample(oracle::data_path("sample_default.cfg"));
  CHECK(smp.temperature_uK == 10.0);
  CHECK(smp.length_cm == 0.084);
  CHECK(smp.atom_count == 4000);
  validate(smp, lat);  // consistent pair
}

TEST_CASE("unknown keys in config files are rejected") {
  const auto path = write_temp("maglat_bad_lattice.cfg",
                               "wavelength_nm = 1063.8\n"
                               "trap_depth_uK = 64\n"
                               "circ_degree_A = 0.5\n"
                               "typo_key = 1\n");
  CHECK_THROWS_WITH_AS(load_lattice(path),
                       doctest::Contains("typo_key"),
                       ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("validation invariants name the offending field") {
  LatticeConfig lat;
  lat.wavelength_nm = 1063.8;
  lat.trap_depth_uK = -1.0;
  lat.circ_degree_A = 0.0;
  CHECK_THROWS_WITH_AS(validate(lat),
                       doctest::Contains("trap_depth_uK"),
                       InvariantError);
  lat.trap_depth_uK = 64.0;
  lat.circ_degree_A = 1.5;
  CHECK_THROWS_WITH_AS(validate(lat),
                       doctest::Contains("circ_degree_A"),
                       InvariantError);
  lat.circ_degree_A = 0.991;
  SampleConfig smp;
  smp.temperature_uK = 80.0;  // above depth: untrapped
  smp.length_cm = 0.1;
  smp.gradient_G_per_cm = 0.0;
  smp.loss_time_s = 1.0;
  smp.atom_count = 10;
  CHECK_THROWS_WITH_AS(validate(smp, lat),
                       doctest::Contains("temperature_uK"),
                       InvariantError);
}

TEST_CASE("trap depth to intensity conversion and inverse") {
  const SpeciesData s = load_species(oracle::data_path("species_rb87.cfg"));
  const LatticeConfig lat = load_lattice(oracle::data_path("lattice_1064.cfg"));
  const double I = trap_depth_to_intensity(s, lat);
  CHECK(I == doctest::Approx(42008.86).epsilon(1e-3));
  CHECK(intensity_to_trap_depth(s, lat, I) ==
        doctest::Approx(lat.trap_depth_uK).epsilon(1e-12));
  LatticeConfig half = lat;
  half.trap_depth_uK = 32.0;
  CHECK(trap_depth_to_intensity(s, half) == doctest::Approx(0.5 * I).epsilon(1e-12));
}
