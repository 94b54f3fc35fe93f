#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "kdyn/cli/run.hpp"
#include "kdyn/error.hpp"
#include "kdyn/parallel.hpp"

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace kdyn;
  CLI::App app{"Cohomological dynamics of Kaehler automorphisms"};
  std::string command, config_path, output_path, format;
  long precision = 0;
  app.add_option("command", command, "degrees|jordan|relative|cesaro|green|iterate|mixing|chain")
      ->required()
      ->check(CLI::IsMember(cli::kCommands));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--output", output_path, "result file (stdout when omitted)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--precision", precision, "working precision in bits (>= 64)");
  CLI11_PARSE(app, argc, argv);

  const auto started = std::chrono::steady_clock::now();
  const std::string start_stamp = timestamp();
  cli::RunOutput out;
  std::string fmt = format.empty() ? "json" : format;
  try {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    auto config = cli::parse_config(buf.str());
    config.command = command;
    if (!format.empty()) config.format = format;
    if (!output_path.empty()) config.output_path = output_path;
    if (precision != 0) {
      if (precision < 64) throw Error(ErrorCode::ValidationError, "precision_bits: must be at least 64");
      config.precision_bits = precision;
    }
    fmt = config.format;
    output_path = config.output_path;
    out = cli::run(config);
  } catch (const Error& e) {
    out = cli::error_output(command, e.code(), e.what(), fmt);
  }

  if (output_path.empty()) {
    std::cout << out.text;
  } else {
    std::ofstream o(output_path, std::ios::binary);
    o << out.text;
    if (!o) {
      std::cerr << "cannot write " << output_path << "\n";
      return 1;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::ofstream log(output_path + ".log", std::ios::app);
    log << start_stamp << " start " << command << " config=" << config_path << " threads=" << thread_count() << "\n"
        << timestamp() << " end status=" << out.record.value("status", "error") << " seconds=" << seconds << "\n";
  }
  if (out.exit_code != 0) std::cerr << "kdyn: " << out.record["error"].value("code", "") << ": "
                                    << out.record["error"].value("message", "") << "\n";
  return out.exit_code;
}
