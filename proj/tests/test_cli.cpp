#include <doctest.h>

#include <mpfr.h>

#include <fstream>
#include <random>
#include <sstream>

#include "kdyn/cli/run.hpp"

using namespace kdyn;
using namespace kdyn::cli;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string example(const std::string& name) { return read_file(std::string(KDYN_SOURCE_DIR) + "/configs/" + name); }

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

const char* kCatMap = R"({"command": "degrees", "model": {"type": "torus", "A": [[2, 1], [1, 1]]}})";

// ((3 + sqrt 5) / 2)^2 = (7 + 3 sqrt 5) / 2 at 256 bits, straight from MPFR.
std::string catmap_degree_digits(int digits) {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_ui(x, 5, MPFR_RNDN);
  mpfr_sqrt(x, x, MPFR_RNDN);
  mpfr_mul_ui(x, x, 3, MPFR_RNDN);
  mpfr_add_ui(x, x, 7, MPFR_RNDN);
  mpfr_div_ui(x, x, 2, MPFR_RNDN);
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.*Re", digits - 1, x);
  mpfr_clear(x);
  return buf;
}

std::string mantissa(const std::string& s, int digits) {
  std::string out;
  for (char c : s) {
    if (c == 'e') break;
    if (std::isdigit(static_cast<unsigned char>(c))) out += c;
  }
  return out.substr(0, static_cast<std::size_t>(digits));
}

}  // namespace

TEST_CASE("minimal torus config parses") {
  const auto c = parse_config(kCatMap);
  CHECK(c.command == "degrees");
  REQUIRE(c.model);
  CHECK(c.model->type == "torus");
  CHECK(c.model->k == 2);
  CHECK(c.model->A(0, 0) == GaussRational(2));
  CHECK(c.precision_bits == 128);
}

TEST_CASE("decimal strings are exact rationals") {
  const auto c = parse_config(R"({"model": {"type": "torus", "A": [["1.5", "0.1+0.2i"], [1, 1]]}})");
  CHECK(c.model->A(0, 0) == GaussRational(mpq_class(3, 2)));
  CHECK(c.model->A(0, 1) == GaussRational(mpq_class(1, 10), mpq_class(2, 10)));
}

TEST_CASE("malformed and invalid configs") {
  SUBCASE("syntax error reports line and column") {
    try {
      parse_config("{\n  \"model\": {\n    \"type\": \"torus\",\n    oops\n}");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
  }
  CHECK(code_of(R"({"model": {"type": "torus", "A": [[2, 1], [1, 1]]}, "extra": 1})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"model": {"type": "torus", "A": [[2.5, 1], [1, 1]]}})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"model": {"type": "torus", "A": [["x", 1], [1, 1]]}})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"model": {"type": "torus", "A": [[2, 1], [1]]}})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"model": {"type": "klein"}})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"precision_bits": 32})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"command": "plot"})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"output": {"format": "xml"}})") == ErrorCode::ValidationError);
  CHECK(code_of(R"({"mixing": {"mode": "trig"}})") == ErrorCode::ValidationError);
}

TEST_CASE("shipped examples parse and round-trip") {
  for (const char* name : {"torus_catmap.json", "mazur_k2_word123.json", "raw_matrices.json"}) {
    CAPTURE(name);
    const auto c = parse_config(example(name));
    const auto again = parse_config(config_to_json(c).dump());
    CHECK(c == again);
    CHECK(config_to_json(again).dump() == config_to_json(c).dump());
  }
}

TEST_CASE("round-trip property on generated configs") {
  std::mt19937_64 rng(20261018);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  auto exact_text = [&]() {
    std::string s = std::to_string(pick(-9, 9));
    if (pick(0, 1)) s += "/" + std::to_string(pick(1, 7));
    if (pick(0, 2) == 0) s += (pick(0, 1) ? "+" : "-") + std::to_string(pick(1, 5)) + "i";
    return "\"" + s + "\"";
  };
  for (int trial = 0; trial < 60; ++trial) {
    const long k = pick(1, 3);
    std::string A = "[";
    for (long r = 0; r < k; ++r) {
      A += r ? ",[" : "[";
      for (long c = 0; c < k; ++c) A += (c ? "," : "") + exact_text();
      A += "]";
    }
    A += "]";
    std::string text = R"({"command": "degrees", "precision_bits": )" + std::to_string(pick(64, 512)) +
                       R"(, "model": {"type": "torus", "A": )" + A + R"(}, "n_max": )" + std::to_string(pick(1, 400));
    if (pick(0, 1)) text += R"(, "relative": {"s": 1, "T": [)" + exact_text() + "], \"lambda_T\": " + exact_text() + "}";
    if (pick(0, 1))
      text += R"(, "mixing": {"mode": "trig", "phi": {"cos": [1, 0]}, "psi": {"terms": [{"freq": [0, 1], "coeff": )" +
              exact_text() + "}]}, \"n_hi\": " + std::to_string(pick(1, 50)) + "}";
    text += "}";
    CAPTURE(text);
    const auto c = parse_config(text);
    CHECK(parse_config(config_to_json(c).dump()) == c);
  }
}

TEST_CASE("degrees on the cat map carries d_1 to 30 digits") {
  const auto out = run(parse_config(kCatMap));
  REQUIRE(out.exit_code == 0);
  const std::string d1 = out.record["result"]["profile"]["degrees"][1];
  CHECK(mantissa(d1, 30) == mantissa(catmap_degree_digits(40), 30));
  CHECK(out.record["result"]["profile"]["degrees"][0] == out.record["result"]["profile"]["degrees"][2]);
  CHECK(out.record["config"] == config_to_json(parse_config(kCatMap)));
  CHECK(out.record["real_format"]["significant_digits"] == decimal_digits(128));
}

TEST_CASE("jordan on a 2x2 Jordan block") {
  const auto out = run(parse_config(R"({"command": "jordan", "jordan": {"matrix": [["2", "1"], ["0", "2"]]}})"));
  REQUIRE(out.exit_code == 0);
  CHECK(out.record["result"]["m"] == 2);
  CHECK(mantissa(out.record["result"]["lambda"], 10) == "2000000000");
}

TEST_CASE("mixing with a zero frequency is an error record") {
  const auto out = run(parse_config(
      R"({"command": "mixing", "model": {"type": "torus", "A": [[2, 1], [1, 1]]}, "mixing": {"m": [0, 0, 0, 0], "m_prime": [1, 0, 0, 0]}})"));
  CHECK(out.exit_code != 0);
  CHECK(out.record["status"] == "error");
  CHECK(out.record["error"]["code"] == "ZeroFrequency");
}

TEST_CASE("missing sections become validation errors") {
  auto out = run(parse_config(R"({"command": "degrees"})"));
  CHECK(out.record["error"]["code"] == "ValidationError");
  out = run(parse_config(R"({"command": "mixing", "model": {"type": "mazur", "k": 2, "word": [1, 2]}, "mixing": {"m": [1, 0, 0, 0], "m_prime": [1, 0, 0, 0]}})"));
  CHECK(out.record["error"]["code"] == "ValidationError");
  out = run(parse_config(R"({"command": "degrees", "model": {"type": "mazur", "k": 2, "word": []}})"));
  CHECK(out.record["error"]["code"] == "EmptyWord");
}

TEST_CASE("identical configs give identical bytes") {
  for (const char* command : {"degrees", "jordan", "cesaro", "green", "mixing", "chain"}) {
    CAPTURE(command);
    auto c = parse_config(example("torus_catmap.json"));
    c.command = command;
    const auto a = run(c), b = run(c);
    CHECK(a.exit_code == 0);
    CHECK(a.text == b.text);
  }
}

TEST_CASE("csv tables are rectangular") {
  auto c = parse_config(example("mazur_k2_word123.json"));
  c.format = "csv";
  for (const char* command : {"degrees", "jordan", "cesaro", "chain"}) {
    CAPTURE(command);
    c.command = command;
    const auto out = run(c);
    REQUIRE(out.exit_code == 0);
    std::istringstream in(out.text);
    std::string line;
    std::getline(in, line);
    const auto columns = std::count(line.begin(), line.end(), ',');
    int rows = 0;
    while (std::getline(in, line)) {
      CHECK(std::count(line.begin(), line.end(), ',') == columns);
      ++rows;
    }
    CHECK(rows > 0);
  }
}

TEST_CASE("iterate via config") {
  const auto out = run(parse_config(
      R"({"command": "iterate", "n_max": 60, "N_max": 60, "iterate": {"G": [[3]], "Lambda": [["2"]], "u": [{"cos": [1]}], "resolution": 4096}})"));
  REQUIRE(out.exit_code == 0);
  CHECK(out.record["result"]["lambda"] == 2.0);
  CHECK(out.record["result"]["holder"]["exponent"].get<double>() < out.record["result"]["holder"]["admissible_bound"].get<double>() + 0.1);

  const auto flat = run(parse_config(
      R"({"command": "iterate", "n_max": 30, "N_max": 30, "iterate": {"G": [[3]], "Lambda": [["2"]], "u": [{"terms": []}], "resolution": 1024}})"));
  REQUIRE(flat.exit_code == 0);
  bool warned = false;
  for (const auto& w : flat.record["warnings"]) warned = warned || w.get<std::string>().find("DegenerateFunction") == 0;
  CHECK(warned);
}
