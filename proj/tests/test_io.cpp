#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lhv/experiments.hpp"
#include "lhv/io.hpp"

#include <filesystem>
#include <fstream>

using namespace lhv;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "lhv_io_tests";
  fs::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("state records round-trip through the plain-text format") {
  auto eng = rng::make_engine(1);
  std::vector<quantum::BlochTwoQubit> states;
  for (int k = 0; k < 8; ++k) states.push_back(quantum::sample_noisy_ball(0.4, eng));

  const fs::path path = temp_dir() / "states.txt";
  io::write_states(path, states);
  const auto back = io::read_states(path);
  REQUIRE(back.size() == states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK((back[i].a - states[i].a).norm() == 0.0);
    CHECK((back[i].b - states[i].b).norm() == 0.0);
    CHECK((back[i].T - states[i].T).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("state parser rejects malformed records") {
  CHECK_THROWS_AS(io::parse_state("1 2 3"), std::runtime_error);
  CHECK_THROWS_AS(io::parse_state("1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16"), std::runtime_error);
  const auto s = io::parse_state("0 0 0.1  0 0 0  0.05 0 0  0 0 0  0 0 0.02");
  CHECK(s.a[2] == 0.1);
  CHECK(s.T(0, 0) == 0.05);
  CHECK(s.T(2, 2) == 0.02);
}

TEST_CASE("csv quoting follows RFC 4180") {
  CHECK(io::csv_escape("plain") == "plain");
  CHECK(io::csv_escape("with,comma") == "\"with,comma\"");
  CHECK(io::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::csv_row({"a", "b,c", "1.5"}) == "a,\"b,c\",1.5\n");
}

TEST_CASE("format_double round-trips exactly") {
  auto eng = rng::make_engine(2);
  for (int k = 0; k < 1000; ++k) {
    const double v = std::exp(rng::uniform(eng, -20.0, 20.0)) *
                     (rng::uniform(eng) < 0.5 ? -1.0 : 1.0);
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("sha256 matches the FIPS test vectors") {
  CHECK(io::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(io::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // Multi-block input (> 64 bytes).
  CHECK(io::sha256_hex(std::string(1000, 'a')) ==
        "41edece42d63e8d9bf515a9ba6932e1c20cbc9f5a5d134645adb5db1b9737ea3");
}

TEST_CASE("sha256_file streams the same digest as the in-memory hash") {
  const fs::path path = temp_dir() / "hash_me.bin";
  std::string payload;
  auto eng = rng::make_engine(3);
  for (int k = 0; k < 200000; ++k) payload += char('a' + (eng() % 26));
  std::ofstream(path, std::ios::binary) << payload;
  CHECK(io::sha256_file(path) == io::sha256_hex(payload));
}

TEST_CASE("flat config parsing: values, comments, errors") {
  const auto cfg = io::Config::parse_string("seed = 42\n# comment\nomega=2.5\nname = run a\n");
  CHECK(cfg.get_int("seed", 0) == 42);
  CHECK(cfg.get_double("omega", 0.0) == 2.5);
  CHECK(cfg.get_string("name", "") == "run a");
  CHECK(cfg.get_int("missing", 7) == 7);

  CHECK_THROWS_AS(io::Config::parse_string("not a pair\n"), std::runtime_error);
  CHECK_THROWS_AS(io::Config::parse_string("dup = 1\ndup = 2\n"), std::runtime_error);
  CHECK_THROWS_AS(io::Config::parse_string("x = abc\n").get_double("x", 0.0), std::runtime_error);

  const auto bad = io::Config::parse_string("seed = notanumber\n");
  CHECK_THROWS_AS(bad.get_int("seed", 0), std::runtime_error);
}

TEST_CASE("experiment config rejects unknown keys and bad values") {
  CHECK_THROWS_WITH_AS(
      experiments::ExperimentConfig::from_config(io::Config::parse_string("sede = 42\n")),
      doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_AS(
      experiments::ExperimentConfig::from_config(io::Config::parse_string("basis = fancy\n")),
      std::runtime_error);
  CHECK_THROWS_AS(
      experiments::ExperimentConfig::from_config(io::Config::parse_string("integrator = maybe\n")),
      std::runtime_error);
  CHECK_THROWS_AS(experiments::ExperimentConfig::from_config(
                      io::Config::parse_string("states_file = /no/such/file\n")),
                  std::runtime_error);

  const auto cfg = experiments::ExperimentConfig::from_config(
      io::Config::parse_string("seed = 5\nL_list = 2,4\nomega = 0.5\n"));
  CHECK(cfg.seed == 5);
  CHECK(cfg.degree_list == std::vector<int>{2, 4});
  CHECK(cfg.omega == 0.5);
}

TEST_CASE("config int list parsing") {
  const auto cfg = io::Config::parse_string("L_list = 2,4,6,8\n");
  CHECK(cfg.get_int_list("L_list", {}) == std::vector<int>{2, 4, 6, 8});
  CHECK_THROWS_AS(io::Config::parse_string("L_list = 2,x\n").get_int_list("L_list", {}),
                  std::runtime_error);
}

TEST_CASE("output writer emits files plus a manifest with hashes") {
  const fs::path dir = temp_dir() / "writer";
  fs::remove_all(dir);
  const auto cfg = io::Config::parse_string("seed = 1\n");
  experiments::OutputWriter writer(dir, "unit-test", cfg);
  writer.add_file("table.csv", "a,b\n1,2\n");
  writer.commit();

  CHECK(fs::exists(dir / "table.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  std::ifstream manifest(dir / "manifest.json");
  std::string text((std::istreambuf_iterator<char>(manifest)), std::istreambuf_iterator<char>());
  CHECK(text.find("unit-test") != std::string::npos);
  CHECK(text.find(io::sha256_hex("a,b\n1,2\n")) != std::string::npos);
}
