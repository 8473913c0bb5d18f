#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "chainscope/ca.hpp"
#include "chainscope/chains.hpp"
#include "chainscope/citygraph.hpp"
#include "chainscope/ingest.hpp"
#include "chainscope/metrics.hpp"
#include "chainscope/morphology.hpp"
#include "chainscope/report.hpp"

namespace py = pybind11;
namespace cs = chainscope;

namespace {

cs::ForceMode force_mode_arg(const std::string& text) {
  const auto mode = cs::parse_force_mode(text);
  if (!mode) throw cs::Error(cs::ErrorKind::InvalidArgument, "force_mode must be literal_ab_ratio or product");
  return *mode;
}

std::optional<cs::Region> orientation_arg(const std::optional<std::string>& text) {
  if (!text || *text == "all") return std::nullopt;
  const auto region = cs::parse_orientation(*text);
  if (!region) throw cs::Error(cs::ErrorKind::InvalidArgument, "unknown orientation '" + *text + "'");
  return region;
}

py::object to_python(const nlohmann::json& value) {
  return py::module_::import("json").attr("loads")(value.dump());
}

py::dict chain_dict(const cs::Chain& chain) {
  py::list levels;
  for (const auto& level : chain.levels) {
    levels.append(py::dict(py::arg("firm") = level.firm_id, py::arg("city") = level.city_id,
                           py::arg("country") = level.country));
  }
  py::object orientation = py::none();
  if (chain.orientation) orientation = py::str(std::string(cs::to_string(*chain.orientation)));
  return py::dict(py::arg("id") = chain.id, py::arg("levels") = levels, py::arg("forces") = chain.link_forces,
                  py::arg("orientation") = orientation, py::arg("revenue") = chain.attributable_revenue);
}

cs::Digraph digraph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
  cs::Digraph graph(n);
  for (auto [u, v] : arcs) graph.add_arc(u, v);
  return graph;
}

cs::ContingencyTable table_arg(const std::vector<std::vector<std::int64_t>>& counts,
                               std::optional<std::vector<std::string>> rows,
                               std::optional<std::vector<std::string>> cols) {
  cs::ContingencyTable table;
  table.counts = counts;
  if (rows) {
    table.row_labels = *rows;
  } else {
    for (std::size_t i = 0; i < counts.size(); ++i) table.row_labels.push_back("r" + std::to_string(i + 1));
  }
  if (cols) {
    table.col_labels = *cols;
  } else if (!counts.empty()) {
    for (std::size_t j = 0; j < counts[0].size(); ++j) table.col_labels.push_back("c" + std::to_string(j + 1));
  }
  return table;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "chainscope core bindings";
  m.attr("__version__") = std::string(cs::kVersion);

  // Held by the module for the lifetime of the interpreter.
  static PyObject* error = py::exception<cs::Error>(m, "ChainscopeError", PyExc_RuntimeError).release().ptr();
  static PyObject* validation = py::exception<cs::ValidationError>(m, "ValidationError", error).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const cs::ValidationError& e) {
      py::list issues;
      for (const auto& issue : e.issues()) {
        issues.append(py::make_tuple(std::string(cs::to_string(issue.kind)), issue.file, issue.line, issue.message));
      }
      py::object instance = py::handle(validation)(e.what());
      instance.attr("issues") = issues;
      PyErr_SetObject(validation, instance.ptr());
    } catch (const cs::PipelineError& e) {
      py::object instance = py::handle(error)(e.what());
      instance.attr("kind") = std::string(cs::to_string(e.kind()));
      instance.attr("stage") = e.stage();
      PyErr_SetObject(error, instance.ptr());
    } catch (const cs::Error& e) {
      py::object instance = py::handle(error)(e.what());
      instance.attr("kind") = std::string(cs::to_string(e.kind()));
      PyErr_SetObject(error, instance.ptr());
    }
  });

  py::class_<cs::Dataset>(m, "Dataset")
      .def_property_readonly("cities",
                             [](const cs::Dataset& d) {
                               py::list out;
                               for (const auto& c : d.cities()) {
                                 out.append(py::dict(py::arg("id") = c.id, py::arg("name") = c.name,
                                                     py::arg("country") = c.country,
                                                     py::arg("population_2011") = c.population_2011,
                                                     py::arg("size_class") = std::string(cs::to_string(c.size_class))));
                               }
                               return out;
                             })
      .def_property_readonly("firms",
                             [](const cs::Dataset& d) {
                               py::list out;
                               for (const auto& f : d.firms()) {
                                 out.append(py::dict(py::arg("id") = f.id, py::arg("name") = f.name,
                                                     py::arg("city_id") = f.city_id,
                                                     py::arg("activity") = f.raw_activity_label,
                                                     py::arg("sector") = std::string(cs::to_string(f.sector)),
                                                     py::arg("turnover") = f.turnover));
                               }
                               return out;
                             })
      .def_property_readonly("links",
                             [](const cs::Dataset& d) {
                               py::list out;
                               for (const auto& l : d.links()) {
                                 out.append(py::dict(py::arg("owner") = l.owner_firm_id,
                                                     py::arg("owned") = l.owned_firm_id,
                                                     py::arg("participation") = l.participation_rate,
                                                     py::arg("force") = l.force));
                               }
                               return out;
                             })
      .def_property_readonly("force_mode", [](const cs::Dataset& d) { return std::string(cs::to_string(d.force_mode())); })
      .def("__eq__", [](const cs::Dataset& a, const cs::Dataset& b) { return a == b; })
      .def("__repr__", [](const cs::Dataset& d) {
        return "<Dataset cities=" + std::to_string(d.cities().size()) + " firms=" + std::to_string(d.firms().size()) +
               " links=" + std::to_string(d.links().size()) + ">";
      });

  m.def(
      "load_dataset",
      [](const std::filesystem::path& dir, bool percent_input, const std::string& force_mode) {
        return cs::load_dataset(cs::DatasetPaths::in_directory(dir), {percent_input, force_mode_arg(force_mode)});
      },
      py::arg("directory"), py::arg("percent_input") = false, py::arg("force_mode") = "literal_ab_ratio");
  m.def("write_dataset", &cs::write_dataset, py::arg("dataset"), py::arg("directory"));
  m.def(
      "generate_fixture",
      [](std::uint64_t seed, std::size_t cities, std::size_t firms, std::size_t links, const std::string& mode) {
        return cs::generate_fixture(seed, {cities, firms, links}, force_mode_arg(mode));
      },
      py::arg("seed") = 42, py::arg("cities") = 20, py::arg("firms") = 60, py::arg("links") = 120,
      py::arg("force_mode") = "literal_ab_ratio");

  m.def(
      "build_chains",
      [](const cs::Dataset& dataset, unsigned workers) {
        const auto set = cs::build_chains(dataset, workers);
        py::list chains, cycles;
        for (const auto& chain : set.chains) chains.append(chain_dict(chain));
        for (const auto& cycle : set.cycles) cycles.append(cycle.firm_ids);
        return py::make_tuple(chains, cycles);
      },
      py::arg("dataset"), py::arg("workers") = 1,
      "Returns (chains, cycles); cycles lists the firm ids of each excluded ownership cycle.");

  m.def(
      "export_city_graph",
      [](const cs::Dataset& dataset, std::optional<std::string> orientation, const std::string& format,
         bool include_degenerate) {
        const auto parsed = cs::parse_graph_format(format);
        if (!parsed) throw cs::Error(cs::ErrorKind::UnsupportedFormat, "unknown graph format '" + format + "'");
        const auto chains = cs::build_chains(dataset).chains;
        return cs::export_graph(cs::build_graph(chains, dataset, {orientation_arg(orientation), include_degenerate}),
                                *parsed);
      },
      py::arg("dataset"), py::arg("orientation") = py::none(), py::arg("format") = "graphml",
      py::arg("include_degenerate") = true);

  m.def(
      "centrality",
      [](const std::string& text, const std::string& format, bool normalized) {
        const auto parsed = cs::parse_graph_format(format);
        if (!parsed) throw cs::Error(cs::ErrorKind::UnsupportedFormat, "unknown graph format '" + format + "'");
        const auto report = cs::compute_centrality(cs::import_graph(text, *parsed), {normalized, 1});
        py::list out;
        for (const auto& c : report.cities) {
          out.append(py::dict(py::arg("city") = c.city_id, py::arg("degree") = c.degree,
                              py::arg("degree_in") = c.degree_in, py::arg("degree_out") = c.degree_out,
                              py::arg("betweenness") = c.betweenness, py::arg("revenue") = c.cumulated_revenue));
        }
        return out;
      },
      py::arg("graph_text"), py::arg("format") = "graphml", py::arg("normalized") = false);

  m.def(
      "betweenness",
      [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arcs, bool normalized,
         unsigned workers) { return cs::betweenness(digraph(n, arcs), {normalized, workers}); },
      py::arg("n"), py::arg("arcs"), py::arg("normalized") = false, py::arg("workers") = 1);
  m.def(
      "betweenness_oracle",
      [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
        return cs::betweenness_oracle(digraph(n, arcs));
      },
      py::arg("n"), py::arg("arcs"));

  m.def(
      "classify_structure",
      [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
        cs::SimpleGraph graph(n);
        for (auto [u, v] : edges) graph.add_edge(u, v);
        return std::string(cs::to_string(cs::classify_structure(graph)));
      },
      py::arg("n"), py::arg("edges"));

  m.def(
      "fit_ca",
      [](const std::vector<std::vector<std::int64_t>>& counts, std::optional<std::vector<std::string>> rows,
         std::optional<std::vector<std::string>> cols, std::size_t axes) {
        const auto result = cs::fit_ca(table_arg(counts, std::move(rows), std::move(cols)));
        return to_python(cs::to_json(result, cs::axis_report(result, std::min(axes, result.axes()))));
      },
      py::arg("counts"), py::arg("row_labels") = py::none(), py::arg("col_labels") = py::none(),
      py::arg("axes") = 2);

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
         std::optional<unsigned> workers) {
        auto config = cs::load_run_config(config_path);
        if (workers) config.workers = *workers;
        cs::BundleSummary summary;
        {
          py::gil_scoped_release release;
          summary = cs::run_pipeline(config, out_dir);
        }
        std::vector<std::string> files;
        for (const auto& f : summary.files) files.push_back(f.string());
        return py::dict(py::arg("manifest_sha256") = summary.manifest_digest, py::arg("files") = files,
                        py::arg("chains") = summary.chains, py::arg("cycles") = summary.cycles);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("workers") = py::none());
}
