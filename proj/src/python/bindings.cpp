#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kdyn/cli/run.hpp"
#include "kdyn/error.hpp"
#include "kdyn/parallel.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact cohomological dynamics engine";

  m.def(
      "resolve_config",
      [](const std::string& text) {
        try {
          return std::make_tuple(std::string(), kdyn::cli::config_to_json(kdyn::cli::parse_config(text)).dump());
        } catch (const kdyn::Error& e) {
          return std::make_tuple(std::string(kdyn::error_code_name(e.code())), std::string(e.what()));
        }
      },
      py::arg("text"), "Parses a config. Returns (error code or '', resolved JSON or message).");

  m.def(
      "run",
      [](const std::string& text, const std::string& command) {
        kdyn::cli::RunOutput out;
        {
          py::gil_scoped_release release;
          try {
            auto config = kdyn::cli::parse_config(text);
            if (!command.empty()) config.command = command;
            config.format = "json";
            out = kdyn::cli::run(config);
          } catch (const kdyn::Error& e) {
            out = kdyn::cli::error_output(command, e.code(), e.what(), "json");
          }
        }
        return std::make_tuple(out.exit_code, out.record.dump());
      },
      py::arg("text"), py::arg("command") = "", "Runs a config. Returns (exit code, JSON record).");

  m.def("thread_count", &kdyn::thread_count);
  m.attr("commands") = kdyn::cli::kCommands;
}
