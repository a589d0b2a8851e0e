// Python bindings for the grid-to-hypercube embedding.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "gridcube/verify.hpp"

namespace py = pybind11;
using namespace gridcube;

namespace {

std::map<int, BinaryMatrix> load_seeds(const std::string& path) {
  std::map<int, BinaryMatrix> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  for (auto& t : parse_matrices(in)) out[t.stage] = t.F;
  return out;
}

std::vector<std::string> matrix_rows(const BinaryMatrix& F) {
  std::vector<std::string> rows;
  for (size_t r = 0; r < F.rows(); ++r) {
    std::string s;
    for (size_t c = 0; c < F.cols(); ++c) s += F.at(r, c) ? '1' : '0';
    rows.push_back(s);
  }
  return rows;
}

py::dict report_dict(const Report& rep) {
  py::dict checks;
  for (const auto& c : rep.checks()) {
    const char* status = c.status == Status::Pass ? "PASS" : c.status == Status::Fail ? "FAIL" : "REPORTED";
    checks[py::str(c.key)] = py::make_tuple(status, c.value);
  }
  py::dict out;
  out["ok"] = rep.ok();
  out["checks"] = checks;
  out["text"] = rep.str();
  return out;
}

}  // namespace

PYBIND11_MODULE(_gridcube, m) {
  m.doc() = "Embeddings of k-dimensional grids into hypercubes";

  py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);
  py::register_exception<SearchExhausted>(m, "SearchExhausted", PyExc_RuntimeError);

  m.def("exponents", [](const std::vector<u64>& dims) { return compute_exponents(dims); }, py::arg("dims"),
        "e_0..e_k for the given side lengths");
  m.def(
      "level_budgets",
      [](const std::vector<u64>& dims) {
        const GridSpec g(dims);
        std::vector<u64> u;
        for (int i = 1; i <= g.k(); ++i) u.push_back(g.level_budget(i));
        return u;
      },
      py::arg("dims"));
  m.def("s_sequence", [](const std::vector<u64>& dims, int i) { return s_sequence(GridSpec(dims), i); },
        py::arg("dims"), py::arg("stage"));
  m.def(
      "designation_matrix",
      [](const std::vector<u64>& dims, int i) { return matrix_rows(build_blank_plan(GridSpec(dims), i).F); },
      py::arg("dims"), py::arg("stage"), "F(i) as strings of 0/1, 1 marking a blank level");
  m.def(
      "build_fx",
      [](const std::vector<std::int64_t>& X, std::int64_t n) {
        RoundingSpec s;
        s.X = X;
        s.n = n;
        return matrix_rows(build_FX(s));
      },
      py::arg("row_sums"), py::arg("columns"));

  m.def(
      "embed",
      [](const std::vector<u64>& dims, const std::string& seed, const std::vector<int>& windows) {
        const GridSpec g(dims);
        PipelineOptions po;
        po.seeds = load_seeds(seed);
        po.retain_stages = false;
        const Pipeline p(g, po);
        const auto emb = assemble_Hk(g, p.fk(), windows.empty() ? default_windows(g) : windows);
        const auto d = dilation(emb);
        py::dict out;
        out["n"] = emb.n;
        out["labels"] = emb.label;
        out["windows"] = emb.windows();
        out["dilation"] = d.dilation;
        out["histogram"] = d.histogram;
        std::vector<std::vector<u32>> fk;
        for (Rank v = 0; v < g.total(); ++v) fk.emplace_back(p.fk().at(v).begin(), p.fk().at(v).end());
        out["fk"] = fk;
        return out;
      },
      py::arg("dims"), py::arg("seed") = "", py::arg("windows") = std::vector<int>{},
      "Build the embedding; labels are indexed by vertex rank with x_1 fastest");
  m.def(
      "embedding_file",
      [](const std::vector<u64>& dims) {
        const GridSpec g(dims);
        PipelineOptions po;
        po.retain_stages = false;
        const Pipeline p(g, po);
        std::ostringstream os;
        write_embedding(os, assemble_Hk(g, p.fk(), default_windows(g)));
        return os.str();
      },
      py::arg("dims"));
  m.def(
      "audit",
      [](const std::vector<u64>& dims, const std::string& seed) {
        AuditOptions opt;
        opt.seeds = load_seeds(seed);
        return report_dict(audit(GridSpec(dims), opt));
      },
      py::arg("dims"), py::arg("seed") = "");
  m.def(
      "audit_file",
      [](const std::string& text) {
        std::istringstream in(text);
        return report_dict(audit_file(in));
      },
      py::arg("text"));

  m.def(
      "caterpillar",
      [](int t, int leaf_degree) {
        const auto c = search_caterpillar(t, leaf_degree);
        return py::make_tuple(c.spine, c.leaves);
      },
      py::arg("t"), py::arg("leaf_degree"), "Spine and leaves of a searched Cat(2^t/(2r+2), 2r+1)");
  m.def(
      "labeling",
      [](int t, int window) { return labeling_for(t, window).label; }, py::arg("t"), py::arg("window"),
      "Label (1..2^t) of every vertex; window 0 is Gray");
  m.def(
      "window_ok",
      [](int t, int window, int test_window) {
        return !verify_window(labeling_for(t, window), test_window, 3).has_value();
      },
      py::arg("t"), py::arg("window"), py::arg("test_window"));
  m.def("bandwidth", [](const std::vector<u64>& dims, int n) { return brute_force_bandwidth(GridSpec(dims), n); },
        py::arg("dims"), py::arg("n"), "Exact smallest dilation into Q_n for tiny grids");
}
