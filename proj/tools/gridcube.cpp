// gridcube: build grid-to-hypercube embeddings, audit them, and manage
// caterpillar caches.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gridcube/verify.hpp"

using namespace gridcube;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::map<int, BinaryMatrix> load_seeds(const std::string& path) {
  std::map<int, BinaryMatrix> seeds;
  if (path.empty()) return seeds;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read seed file " + path);
  for (auto& t : parse_matrices(in)) seeds[t.stage] = std::move(t.F);
  return seeds;
}

std::vector<int> parse_windows(const std::vector<int>& given, const GridSpec& spec) {
  if (given.empty()) return default_windows(spec);
  if (given.size() == 1) return std::vector<int>(static_cast<size_t>(spec.k()), given.front());
  if (static_cast<int>(given.size()) != spec.k()) throw std::invalid_argument("--windows needs 1 or k values");
  return given;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

fs::path cache_file(const std::string& dir, int t, int r) {
  return fs::path(dir) / ("cat_" + std::to_string(t) + "_" + std::to_string(r) + ".txt");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid to hypercube embeddings"};
  app.require_subcommand(1);
  unsigned threads = 0;
  u64 cap = kDefaultVertexCap;
  app.add_option("--threads", threads, "Worker threads for scans (default: all cores)");
  app.add_option("--cap", cap, "Largest grid accepted, in vertices");

  auto* embed = app.add_subcommand("embed", "Build H^k and write a GRIDCUBE file");
  std::vector<u64> dims;
  std::string seed, out;
  int dump = 0;
  std::vector<int> windows;
  embed->add_option("dims", dims, "Side lengths a_1 ... a_k")->required();
  embed->add_option("--seed", seed, "Designation matrices to use instead of the rounding");
  embed->add_option("--out", out, "Output path (default: stdout, summary on stderr)");
  embed->add_option("--dump-stage", dump, "Print f_i for this stage");
  embed->add_option("--windows", windows, "Labeling window per dimension: 0 Gray, 3 or 5 caterpillar");

  auto* audit_cmd = app.add_subcommand("audit", "Run the invariant battery on a grid or a GRIDCUBE file");
  std::vector<std::string> target;
  std::string file;
  audit_cmd->add_option("target", target, "Side lengths, or a single GRIDCUBE file path");
  audit_cmd->add_option("--file", file, "GRIDCUBE file to audit");
  audit_cmd->add_option("--seed", seed, "Designation matrices to use instead of the rounding");
  audit_cmd->add_option("--windows", windows, "Labeling window per dimension");

  auto* cat = app.add_subcommand("cat", "Search, double or load a caterpillar and verify its window");
  int t = 0, leaf = 0, from = 0;
  std::string cache;
  cat->add_option("t", t, "Hypercube dimension")->required();
  cat->add_option("leaf_degree", leaf, "Leaves per spine vertex, 2r+1")->required();
  cat->add_option("--from", from, "Double up from a caterpillar of this dimension");
  cat->add_option("--cache", cache, "Cache directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*embed) {
      const GridSpec spec(dims, cap);
      PipelineOptions po;
      po.seeds = load_seeds(seed);
      po.retain_stages = dump != 0;
      const Pipeline p(spec, po);
      if (dump) {
        if (dump < 2 || dump > spec.k()) throw std::invalid_argument("--dump-stage must be in 2..k");
        std::cout << dump_stage(p, dump);
      }
      const auto emb = assemble_Hk(spec, p.fk(), parse_windows(windows, spec));
      const auto d = dilation(emb, threads);
      std::ostringstream summary;
      std::vector<int> u;
      for (int i = 1; i <= spec.k(); ++i) u.push_back(static_cast<int>(spec.level_budget(i)));
      summary << "grid " << spec.to_string() << "\nn " << emb.n << "\nu " << join(u) << "\nwindows "
              << join(emb.windows()) << "\ndilation " << d.dilation << "\n";
      if (out.empty()) {
        write_embedding(std::cout, emb);
        std::cerr << summary.str();
      } else {
        std::ofstream f(out);
        if (!f) throw std::invalid_argument("cannot write " + out);
        write_embedding(f, emb);
        std::cout << summary.str();
      }
      return 0;
    }

    if (*audit_cmd) {
      bool numeric = !target.empty();
      for (const auto& s : target) numeric = numeric && s.find_first_not_of("0123456789") == std::string::npos;
      if (file.empty() && target.size() == 1 && !numeric) file = target.front();
      Report rep;
      if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw std::invalid_argument("cannot read " + file);
        rep = audit_file(in, cap, threads);
      } else {
        if (!numeric) throw std::invalid_argument("audit needs side lengths or a file");
        std::vector<u64> a;
        for (const auto& s : target) a.push_back(std::stoull(s));
        const GridSpec spec(a, cap);
        AuditOptions opt;
        opt.seeds = load_seeds(seed);
        opt.windows = parse_windows(windows, spec);
        opt.threads = threads;
        rep = audit(spec, opt);
      }
      std::cout << rep.str();
      return rep.ok() ? 0 : kExitFail;
    }

    if (*cat) {
      const int r = caterpillar_r(leaf);
      Caterpillar c;
      if (!cache.empty() && fs::exists(cache_file(cache, t, r))) {
        std::ifstream in(cache_file(cache, t, r));
        c = read_caterpillar(in);
        std::cerr << "loaded " << cache_file(cache, t, r).string() << "\n";
      } else if (from) {
        if (from > t) throw std::invalid_argument("--from must not exceed t");
        if (!cache.empty() && fs::exists(cache_file(cache, from, r))) {
          std::ifstream in(cache_file(cache, from, r));
          c = read_caterpillar(in);
        } else {
          c = search_caterpillar(from, leaf);
        }
        while (c.t < t) c = double_caterpillar(c);
      } else {
        c = search_caterpillar(t, leaf);
      }
      const auto lab = label_from_caterpillar(c);
      const auto bad = verify_window(lab, c.window(), 3, threads);
      const auto tight = verify_window(lab, c.window() + 1, 3, threads);
      std::cerr << "Cat(" << c.e() << "," << c.leaf_degree() << ") in Q_" << c.t << "\nwindow " << c.window() << ": "
                << (bad ? "FAIL" : "verified") << "\nwindow " << c.window() + 1 << ": "
                << (tight ? "counterexample at labels " + std::to_string(tight->label1) + "," +
                                std::to_string(tight->label2)
                          : std::string("no counterexample"))
                << "\n";
      if (!cache.empty()) {
        fs::create_directories(cache);
        std::ofstream f(cache_file(cache, t, r));
        write_caterpillar(f, c);
      } else {
        write_caterpillar(std::cout, c);
      }
      return bad ? kExitFail : 0;
    }
  } catch (const SearchExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return 0;
}
