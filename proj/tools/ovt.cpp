#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ovt/bench.hpp"
#include "ovt/hierarchy.hpp"
#include "ovt/io.hpp"
#include "ovt/recursion.hpp"
#include "ovt/sweep.hpp"

namespace {

// Bad input that the user can fix; exits with status 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ovt::Rect parse_canvas(const std::string& s) {
  const auto x = s.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    const double w = std::stod(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("");
    const std::string hs = s.substr(x + 1);
    const double h = std::stod(hs, &used);
    if (used != hs.size() || !(w > 0.0) || !(h > 0.0)) throw std::invalid_argument("");
    return {0.0, 0.0, w, h};
  } catch (const std::exception&) {
    throw UsageError("--canvas expects WxH with positive sizes, got '" + s + "'");
  }
}

// "500,5000,20000", "50..600" (step 50) or "50..600:25".
std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  try {
    if (const auto dots = s.find(".."); dots != std::string::npos) {
      const int lo = std::stoi(s.substr(0, dots));
      std::string rest = s.substr(dots + 2);
      int step = lo;
      if (const auto colon = rest.find(':'); colon != std::string::npos) {
        step = std::stoi(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
      }
      const int hi = std::stoi(rest);
      if (lo < 1 || step < 1 || hi < lo) throw std::invalid_argument("");
      for (int n = lo; n <= hi; n += step) out.push_back(n);
    } else {
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const int n = std::stoi(item);
        if (n < 1) throw std::invalid_argument("");
        out.push_back(n);
      }
    }
  } catch (const std::exception&) {
    throw UsageError("--sizes expects a list like 500,5000 or a range like 50..600, got '" + s + "'");
  }
  if (out.empty()) throw UsageError("--sizes is empty");
  return out;
}

ovt::InitMode parse_init(const std::string& s) {
  if (s == "squarified") return ovt::InitMode::squarified;
  if (s == "random") return ovt::InitMode::random;
  throw UsageError("--init must be squarified or random");
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

struct LayoutArgs {
  std::string input;
  std::string output;
  std::string svg;
  std::string canvas = "1000x680";
  ovt::TreeLayoutOptions opt;
  std::string init = "squarified";
  bool sqrt_weight = false;
  bool same_site = false;
};

int cmd_layout(const LayoutArgs& a) {
  const ovt::Rect canvas = parse_canvas(a.canvas);
  ovt::TreeLayoutOptions opt = a.opt;
  opt.init = parse_init(a.init);
  if (a.sqrt_weight) opt.init_weight = ovt::InitWeight::half_sqrt_area;
  if (a.same_site) opt.history = ovt::FactorHistory::same_site;
  try {
    opt.adapt_params(canvas).validate();
  } catch (const ovt::AdaptationError& e) {
    throw UsageError(e.what());
  }

  ovt::HierarchyNode root;
  try {
    root = ovt::parse_hierarchy(ovt::read_file(a.input));
  } catch (const ovt::HierarchyError& e) {
    throw UsageError(e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }

  const ovt::TreeLayout tl = ovt::layout_tree(std::move(root), canvas, opt);
  nlohmann::json params = {{"rho", opt.rho},
                           {"epsilon_scale", opt.epsilon_scale},
                           {"epsilon", opt.adapt_params(canvas).epsilon},
                           {"max_iterations", opt.max_iterations},
                           {"error_threshold", opt.error_threshold},
                           {"init", a.init},
                           {"init_weight", a.sqrt_weight ? "half_sqrt_area" : "half_area"},
                           {"history", a.same_site ? "same_site" : "previous_site"},
                           {"seed", opt.seed},
                           {"jitter", opt.jitter}};
  const ovt::LayoutDocument doc = ovt::make_document(tl, canvas, params);
  const std::string text = ovt::to_json(doc).dump(2) + "\n";
  if (!a.output.empty()) ovt::write_file(a.output, text);
  if (!a.svg.empty()) ovt::write_file(a.svg, ovt::render_svg(doc));
  if (a.output.empty() && a.svg.empty()) std::cout << text;

  std::ostream& log = a.output.empty() && a.svg.empty() ? std::cerr : std::cout;
  for (const auto& l : tl.layers) {
    log << l.path << "\terror " << l.area_error << "\titerations " << l.iterations
        << (l.converged ? "" : "\tnot converged") << (l.retried ? "\tretried" : "") << '\n';
  }
  return 0;
}

struct DiagramArgs {
  std::string input;
  std::string output;
  std::string svg;
  std::string canvas = "1000x680";
  bool jitter = false;
  std::uint64_t seed = 0;
};

int cmd_diagram(const DiagramArgs& a) {
  const ovt::Rect canvas = parse_canvas(a.canvas);
  std::vector<ovt::Site> sites;
  try {
    sites = ovt::parse_sites(ovt::read_file(a.input));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  for (auto& s : sites) s.target_value = 1.0;
  ovt::SweepOptions so;
  so.jitter = a.jitter;
  so.jitter_seed = a.seed;
  ovt::Diagram d;
  try {
    d = ovt::compute_wov_diagram(sites, canvas, so);
  } catch (const ovt::CoincidentSitesError& e) {
    throw UsageError(std::string(e.what()) + " (use --jitter to separate them)");
  } catch (const ovt::SweepError& e) {
    throw UsageError(e.what());
  }
  const ovt::LayoutDocument doc = ovt::make_document(d, sites, canvas);
  const std::string text = ovt::to_json(doc).dump(2) + "\n";
  if (!a.output.empty()) ovt::write_file(a.output, text);
  if (!a.svg.empty()) ovt::write_file(a.svg, ovt::render_svg(doc));
  if (a.output.empty() && a.svg.empty()) std::cout << text;
  return 0;
}

int cmd_render(const std::string& input, const std::string& svg) {
  ovt::LayoutDocument doc;
  try {
    doc = ovt::document_from_json(nlohmann::json::parse(ovt::read_file(input)));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const std::string out = ovt::render_svg(doc);
  if (svg.empty() || svg == "-") {
    std::cout << out;
  } else {
    ovt::write_file(svg, out);
  }
  return 0;
}

struct BenchArgs {
  std::string sizes;
  int repeats = 10;
  int time_repeats = 1;
  int iters = 1000;
  int converge_iters = 500;
  int warmup = 10;
  int n = 200;
  int aspect_n = 100;
  int seeds = 5;
  std::uint64_t seed = 0;
  std::string init = "squarified";
  std::string input;
  std::string out;
  std::string canvas = "900x900";
};

ovt::BenchConfig bench_config(const BenchArgs& a) {
  ovt::BenchConfig cfg;
  cfg.seed = a.seed;
  cfg.repeats = a.repeats;
  cfg.canvas = parse_canvas(a.canvas);
  try {
    cfg.validate();
  } catch (const ovt::BenchError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int cmd_bench(const std::string& which, const BenchArgs& a) {
  std::ofstream file;
  if (which == "neighbors") {
    ovt::BenchConfig cfg = bench_config(a);
    cfg.site_counts = parse_sizes(a.sizes.empty() ? "500,5000,20000" : a.sizes);
    const auto rows = ovt::run_neighbor_scaling(cfg);
    ovt::write_csv(open_out(a.out, file), rows);
  } else if (which == "time") {
    BenchArgs b = a;
    b.repeats = a.time_repeats;
    ovt::BenchConfig cfg = bench_config(b);
    cfg.site_counts = parse_sizes(a.sizes.empty() ? "50..600" : a.sizes);
    if (a.iters < 1 || a.warmup < 0) throw UsageError("--iters must be positive");
    const auto rows = ovt::run_timing_scaling(cfg, {a.iters, a.warmup});
    ovt::write_csv(open_out(a.out, file), rows);
  } else if (which == "converge") {
    BenchArgs b = a;
    b.repeats = a.seeds;
    ovt::BenchConfig cfg = bench_config(b);
    cfg.site_counts = {a.n};
    if (a.n < 1) throw UsageError("--n must be positive");
    ovt::AdaptParams params;
    if (a.converge_iters < 1) throw UsageError("--iters must be positive");
    params.max_iterations = a.converge_iters;
    std::vector<ovt::ConvergenceRun> runs;
    if (a.init == "both") {
      runs = ovt::run_convergence(cfg, ovt::InitMode::squarified, params);
      auto more = ovt::run_convergence(cfg, ovt::InitMode::random, params);
      runs.insert(runs.end(), more.begin(), more.end());
    } else {
      runs = ovt::run_convergence(cfg, parse_init(a.init), params);
    }
    ovt::write_csv(open_out(a.out, file), runs);
    for (const auto& r : runs) {
      std::cerr << ovt::to_string(r.mode) << " seed " << r.seed << ": initial error "
                << r.initial_error << ", converged at "
                << (r.converged_at < 0 ? std::string("never") : std::to_string(r.converged_at))
                << '\n';
    }
  } else if (which == "aspect") {
    BenchArgs b = a;
    b.repeats = 1;
    ovt::BenchConfig cfg = bench_config(b);
    ovt::HierarchyNode data;
    if (a.input.empty()) {
      if (a.aspect_n < 1) throw UsageError("--n must be positive");
      data = ovt::flat_hierarchy(
          ovt::gen_random_layer(a.aspect_n, cfg, ovt::run_seed(a.seed, a.aspect_n, 0)));
    } else {
      try {
        data = ovt::parse_hierarchy(ovt::read_file(a.input));
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
    }
    const auto rep = ovt::run_aspect_ratio(data, cfg);
    ovt::write_csv(open_out(a.out, file), rep);
    for (const auto& [m, s] : rep.summaries) {
      std::cerr << m << ": min " << s.min << " median " << s.median << " mean " << s.mean
                << " max " << s.max << " iqr " << s.iqr() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal Voronoi treemap layouts"};
  app.require_subcommand(1);

  LayoutArgs la;
  auto* layout = app.add_subcommand("layout", "Lay out a hierarchy JSON file");
  layout->add_option("input", la.input, "Hierarchy JSON")->required();
  layout->add_option("-o,--output", la.output, "Layout JSON output");
  layout->add_option("--svg", la.svg, "SVG output");
  layout->add_option("--canvas", la.canvas, "Canvas size WxH")->capture_default_str();
  layout->add_option("--max-iter", la.opt.max_iterations, "Iteration budget per layer")->capture_default_str();
  layout->add_option("--error-threshold", la.opt.error_threshold, "Convergence threshold")->capture_default_str();
  layout->add_option("--rho", la.opt.rho, "Damping factor")->capture_default_str();
  layout->add_option("--epsilon-scale", la.opt.epsilon_scale, "Minimal weight per canvas diagonal")
      ->capture_default_str();
  layout->add_option("--init", la.init, "squarified or random")->capture_default_str();
  layout->add_option("--seed", la.opt.seed, "Random seed")->capture_default_str();
  layout->add_flag("--jitter", la.opt.jitter, "Separate coincident sites");
  layout->add_flag("--parallel", la.opt.parallel, "Lay out sibling subtrees concurrently");
  layout->add_flag("--sqrt-weight", la.sqrt_weight, "Initial weight from the square root of the area");
  layout->add_flag("--same-site-history", la.same_site, "Damp against the same site's last factor");

  DiagramArgs da;
  auto* diagram = app.add_subcommand("diagram", "Compute one diagram from a sites JSON file");
  diagram->add_option("input", da.input, "JSON array of {x, y, weight?}")->required();
  diagram->add_option("-o,--output", da.output, "Diagram JSON output");
  diagram->add_option("--svg", da.svg, "SVG output");
  diagram->add_option("--canvas", da.canvas, "Canvas size WxH")->capture_default_str();
  diagram->add_flag("--jitter", da.jitter, "Separate coincident sites");
  diagram->add_option("--seed", da.seed, "Jitter seed")->capture_default_str();

  std::string render_in, render_svg;
  auto* render = app.add_subcommand("render", "Render a layout JSON file to SVG");
  render->add_option("input", render_in, "Layout JSON")->required();
  render->add_option("--svg", render_svg, "SVG output (stdout if omitted)");

  BenchArgs ba;
  std::string bench_which;
  auto* bench = app.add_subcommand("bench", "Run an experiment and write CSV");
  bench->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--seed", ba.seed, "Base seed")->capture_default_str();
    c->add_option("--out", ba.out, "CSV output (stdout if omitted)");
    c->add_option("--canvas", ba.canvas, "Canvas size WxH")->capture_default_str();
    c->callback([&, c] { bench_which = c->get_name(); });
  };
  auto* bn = bench->add_subcommand("neighbors", "Pairs checked and valid neighbors per site");
  bn->add_option("--sizes", ba.sizes, "Site counts (default 500,5000,20000)");
  bn->add_option("--repeats", ba.repeats, "Runs per size")->capture_default_str();
  add_common(bn);
  auto* bt = bench->add_subcommand("time", "Milliseconds per iteration");
  bt->add_option("--sizes", ba.sizes, "Site counts (default 50..600)");
  bt->add_option("--iters", ba.iters, "Timed iterations")->capture_default_str();
  bt->add_option("--warmup", ba.warmup, "Untimed leading iterations")->capture_default_str();
  bt->add_option("--repeats", ba.time_repeats, "Trials per size, fastest kept")->capture_default_str();
  add_common(bt);
  auto* bc = bench->add_subcommand("converge", "Area error per iteration");
  bc->add_option("--n", ba.n, "Sites per layer")->capture_default_str();
  bc->add_option("--seeds", ba.seeds, "Number of seeded runs")->capture_default_str();
  bc->add_option("--init", ba.init, "squarified, random or both")->capture_default_str();
  bc->add_option("--iters", ba.converge_iters, "Iteration budget")->capture_default_str();
  add_common(bc);
  auto* ba_ = bench->add_subcommand("aspect", "Leaf aspect ratios against the squarified treemap");
  ba_->add_option("input", ba.input, "Hierarchy JSON (random flat layer if omitted)");
  ba_->add_option("--n", ba.aspect_n, "Sites in the random layer")->capture_default_str();
  add_common(ba_);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*layout) return cmd_layout(la);
    if (*diagram) return cmd_diagram(da);
    if (*render) return cmd_render(render_in, render_svg);
    if (*bench) return cmd_bench(bench_which, ba);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
