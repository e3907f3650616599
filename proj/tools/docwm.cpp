#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "docwm/attacks.hpp"
#include "docwm/corpus.hpp"
#include "docwm/fingerprint.hpp"
#include "docwm/image_io.hpp"
#include "docwm/metrics.hpp"
#include "docwm/watermark.hpp"

namespace fs = std::filesystem;
using namespace docwm;

namespace {

struct RunConfig {
  int algo = 2;
  int block_side = 0;  // 0 = derived from algo
  double g1 = 0.9, g2 = 0.7, g3 = 0.4, g4 = 0.1;
  double pt_coverage = 0.02;
  double alpha_ct = 0.1, alpha_ptpg = 0.2, alpha_cg = 0.2;
  int canon_w = 1280, canon_h = 1024;
  double margin_eps = 32.0;
  double mark_amplitude = 64.0;
  double dct_tolerance = 0.5;
  int dwt_levels = 3;
  std::string watermark;
  std::string out = "out";
  std::uint64_t seed = 1;
};

void apply_config_entry(RunConfig& rc, const std::string& key, const nlohmann::json& v) {
  if (key == "algo") rc.algo = v.get<int>();
  else if (key == "block_side") rc.block_side = v.get<int>();
  else if (key == "gamma1") rc.g1 = v.get<double>();
  else if (key == "gamma2") rc.g2 = v.get<double>();
  else if (key == "gamma3") rc.g3 = v.get<double>();
  else if (key == "gamma4") rc.g4 = v.get<double>();
  else if (key == "pt_coverage") rc.pt_coverage = v.get<double>();
  else if (key == "alpha_ct") rc.alpha_ct = v.get<double>();
  else if (key == "alpha_ptpg") rc.alpha_ptpg = v.get<double>();
  else if (key == "alpha_cg") rc.alpha_cg = v.get<double>();
  else if (key == "canon_w") rc.canon_w = v.get<int>();
  else if (key == "canon_h") rc.canon_h = v.get<int>();
  else if (key == "margin_eps") rc.margin_eps = v.get<double>();
  else if (key == "mark_amplitude") rc.mark_amplitude = v.get<double>();
  else if (key == "dct_tolerance") rc.dct_tolerance = v.get<double>();
  else if (key == "dwt_levels") rc.dwt_levels = v.get<int>();
  else if (key == "watermark") rc.watermark = v.get<std::string>();
  else if (key == "out") rc.out = v.get<std::string>();
  else if (key == "seed") rc.seed = v.get<std::uint64_t>();
  else raise(Errc::ConfigError, "unknown config key: " + key);
}

void load_config_file(RunConfig& rc, const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::FileNotFound, path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      raise(Errc::ConfigError, path + ": " + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) apply_config_entry(rc, it.key(), it.value());
    return;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::size_t h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "watermark" || key == "out") {
      apply_config_entry(rc, key, nlohmann::json(val));
    } else {
      try {
        apply_config_entry(rc, key, nlohmann::json::parse(val));
      } catch (const nlohmann::json::exception&) {
        raise(Errc::ConfigError, "bad value for " + key + ": " + val);
      }
    }
  }
}

PipelineConfig make_pipeline(const RunConfig& rc) {
  PipelineConfig cfg;
  cfg.algo = algo_from_int(rc.algo);
  if (rc.block_side != 0 && rc.block_side != algo_block_side(cfg.algo))
    raise(Errc::ConfigError, "block side " + std::to_string(rc.block_side) +
                                 " inconsistent with " + algo_name(cfg.algo));
  cfg.canon_w = rc.canon_w;
  cfg.canon_h = rc.canon_h;
  cfg.margin_eps = rc.margin_eps;
  cfg.thresholds = {rc.g1, rc.g2, rc.g3, rc.g4, rc.pt_coverage};
  cfg.policy = {rc.alpha_ct, rc.alpha_ptpg, rc.alpha_cg};
  cfg.params.mark_amplitude = rc.mark_amplitude;
  cfg.params.dct_tolerance = rc.dct_tolerance;
  cfg.params.dwt_levels = rc.dwt_levels;
  cfg.params.weights = weight_factors(rc.dwt_levels);
  cfg.validate();
  return cfg;
}

WatermarkBits load_mark_or_default(const RunConfig& rc) {
  if (rc.watermark.empty()) return make_default_watermark();
  return load_watermark(rc.watermark);
}

std::vector<PageImage> load_pages(const DocumentManifest& m) {
  std::vector<PageImage> pages;
  pages.reserve(m.pages.size());
  for (const auto& p : m.pages) pages.push_back(load_page(p));
  return pages;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) raise(Errc::IoError, "short write: " + path);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// ---- subcommand bodies ----

int cmd_embed(const RunConfig& rc, const std::string& manifest_path) {
  DocumentManifest m = load_manifest(manifest_path);
  WatermarkBits w = load_mark_or_default(rc);
  PipelineConfig cfg = make_pipeline(rc);
  EmbedResult res = embed_document(load_pages(m), w, cfg);

  fs::create_directories(rc.out);
  DocumentManifest wm = m;
  wm.pages.clear();
  for (std::size_t i = 0; i < res.pages.size(); ++i) {
    if (res.side.pages[i].blank)
      std::cerr << "warning: page " << i << " is blank, emitted unchanged\n";
    std::string path = (fs::path(rc.out) / (m.id + "_wm_p" + std::to_string(i) + ".png")).string();
    save_page(res.pages[i], path);
    wm.pages.push_back(path);
  }
  save_manifest(wm, (fs::path(rc.out) / (m.id + "_wm.json")).string());
  save_sideinfo(res.side, (fs::path(rc.out) / (m.id + "_sideinfo.json")).string());
  std::cout << "embedded " << res.texture_blocks << " texture blocks across "
            << res.pages.size() << " page(s)\n";
  return 0;
}

int cmd_extract(const RunConfig& rc, const std::string& manifest_path,
                const std::string& sideinfo_path, const std::string& report_path,
                bool algo_given) {
  DocumentManifest m = load_manifest(manifest_path);
  SideInfo side = load_sideinfo(sideinfo_path);
  if (algo_given && static_cast<int>(side.algo) != rc.algo)
    raise(Errc::SideInfoMismatch, "side info was produced by a different algorithm");
  WatermarkBits w = load_mark_or_default(rc);
  ExtractResult res = extract_document(load_pages(m), side, w);

  nlohmann::json j;
  j["algo"] = static_cast<int>(side.algo);
  j["nc_blocks"] = res.report.nc_blocks;
  j["nc_overall"] = res.report.overall;
  j["texture_blocks"] = res.report.texture_blocks;
  std::string text = j.dump(2) + "\n";
  if (report_path.empty())
    std::cout << text;
  else
    write_text(report_path, text);
  return 0;
}

int cmd_classify(const RunConfig& rc, const std::string& image_path,
                 const std::string& report_path) {
  PageImage page = to_luma(load_page(image_path));
  int side = rc.block_side != 0 ? rc.block_side : algo_block_side(algo_from_int(rc.algo));
  Margins margins = detect_margins(sobel_magnitude(page), rc.margin_eps);
  PageImage canon =
      normalize_size(crop(page, margins), rc.canon_w, rc.canon_h, side);
  BlockGrid grid = segment(canon, side, side);
  EnergyThresholds th{rc.g1, rc.g2, rc.g3, rc.g4, rc.pt_coverage};

  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < grid.count(); ++i) {
    BlockStats st = block_stats(grid.blocks[i]);
    arr.push_back({{"block_index", i},
                   {"class", block_class_name(classify_energy(grid.blocks[i], th))},
                   {"energy", block_energy(grid.blocks[i])},
                   {"mean", st.mean},
                   {"variance", st.variance}});
  }
  std::string text = arr.dump(2) + "\n";
  if (report_path.empty())
    std::cout << text;
  else
    write_text(report_path, text);
  return 0;
}

int cmd_attack(const RunConfig& rc, const std::string& image_path, const std::string& image_b,
               const std::string& spec_path, const std::string& out_path,
               const std::string& prov_path) {
  std::ifstream in(spec_path);
  if (!in) raise(Errc::FileNotFound, spec_path);
  std::stringstream ss;
  ss << in.rdbuf();
  AttackSpec spec = attack_spec_from_json(ss.str());
  if (spec.seed == 0) spec.seed = rc.seed;

  PageImage page = load_page(image_path);
  PageImage attacked;
  if (spec.kind == "stitch_pages") {
    if (image_b.empty()) raise(Errc::ConfigError, "stitch_pages needs --image-b");
    attacked = stitch_pages(page, load_page(image_b));
  } else if (spec.kind == "block_edit") {
    PageImage luma = to_luma(page);
    Margins m = detect_margins(sobel_magnitude(luma), rc.margin_eps);
    int side = rc.block_side != 0 ? rc.block_side : algo_block_side(algo_from_int(rc.algo));
    BlockGrid grid = segment(normalize_size(crop(luma, m), rc.canon_w, rc.canon_h, side),
                             side, side);
    attacked = block_edit(page, m, grid, spec.indices, edit_kind_from_name(spec.edit),
                          spec.seed);
  } else {
    attacked = apply_attack(page, spec);
  }
  save_page(attacked, out_path);
  if (!prov_path.empty()) write_text(prov_path, attack_spec_to_json(spec) + "\n");
  return 0;
}

int cmd_evaluate(const RunConfig& rc, const std::string& orig_path,
                 const std::string& suspect_path, const std::string& sideinfo_path,
                 const std::string& report_path) {
  auto load_doc = [](const std::string& path) -> std::vector<PageImage> {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
      return load_pages(load_manifest(path));
    return {load_page(path)};
  };
  std::vector<PageImage> orig = load_doc(orig_path);
  std::vector<PageImage> susp = load_doc(suspect_path);
  if (orig.size() != susp.size())
    raise(Errc::DimensionMismatch, "documents differ in page count");

  double psnr_acc = 0.0, ssim_acc = 0.0;
  for (std::size_t i = 0; i < orig.size(); ++i) {
    psnr_acc += psnr(orig[i], susp[i]);
    ssim_acc += ssim(orig[i], susp[i]);
  }
  nlohmann::json j;
  j["psnr_db"] = psnr_acc / static_cast<double>(orig.size());
  j["ssim"] = ssim_acc / static_cast<double>(orig.size());
  if (!sideinfo_path.empty()) {
    SideInfo side = load_sideinfo(sideinfo_path);
    WatermarkBits w = load_mark_or_default(rc);
    ExtractResult res = extract_document(susp, side, w);
    j["nc_blocks"] = res.report.nc_blocks;
    j["nc_overall"] = res.report.overall;
  }
  std::string text = j.dump(2) + "\n";
  if (report_path.empty())
    std::cout << text;
  else
    write_text(report_path, text);
  return 0;
}

struct SweepGrid {
  std::vector<double> jpeg_q;
  std::vector<double> noise_sigma;
  std::vector<double> rotate_deg;
  std::vector<std::string> printscreen;

  bool empty() const {
    return jpeg_q.empty() && noise_sigma.empty() && rotate_deg.empty() && printscreen.empty();
  }
};

int cmd_sweep(const RunConfig& rc, const std::vector<std::string>& manifest_paths,
              const std::string& grid_path, const std::string& algos_arg,
              const std::string& out_csv) {
  std::ifstream in(grid_path);
  if (!in) raise(Errc::FileNotFound, grid_path);
  nlohmann::json gj;
  try {
    in >> gj;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ConfigError, grid_path + ": " + e.what());
  }
  SweepGrid grid;
  grid.jpeg_q = gj.value("jpeg", std::vector<double>{});
  grid.noise_sigma = gj.value("noise", std::vector<double>{});
  grid.rotate_deg = gj.value("rotate", std::vector<double>{});
  grid.printscreen = gj.value("printscreen", std::vector<std::string>{});
  if (grid.empty()) raise(Errc::ConfigError, "attack grid is empty");

  std::vector<int> algos;
  {
    std::istringstream as(algos_arg);
    std::string tok;
    while (std::getline(as, tok, ',')) algos.push_back(std::stoi(tok));
    if (algos.empty()) raise(Errc::ConfigError, "no algorithms selected");
  }

  WatermarkBits w = load_mark_or_default(rc);
  std::ostringstream csv;
  csv << "attack,param,algo,document,nc_overall,psnr_db,ssim\n";

  for (int algo : algos) {
    RunConfig rcc = rc;
    rcc.algo = algo;
    rcc.block_side = 0;
    PipelineConfig cfg = make_pipeline(rcc);
    for (const auto& mp : manifest_paths) {
      DocumentManifest m = load_manifest(mp);
      std::vector<PageImage> pages = load_pages(m);
      EmbedResult emb = embed_document(pages, w, cfg);

      auto run_point = [&](const std::string& attack, const std::string& param,
                           auto&& attack_fn) {
        std::vector<PageImage> attacked;
        attacked.reserve(emb.pages.size());
        double p_acc = 0.0, s_acc = 0.0;
        for (std::size_t i = 0; i < emb.pages.size(); ++i) {
          PageImage a = attack_fn(emb.pages[i], i);
          if (a.same_dims(emb.pages[i])) {
            p_acc += psnr(emb.pages[i], a);
            s_acc += ssim(emb.pages[i], a);
          } else {
            PageImage back = resize_bilinear(a, emb.pages[i].width, emb.pages[i].height);
            p_acc += psnr(emb.pages[i], back);
            s_acc += ssim(emb.pages[i], back);
          }
          attacked.push_back(std::move(a));
        }
        ExtractResult res = extract_document(attacked, emb.side, w);
        csv << attack << "," << param << "," << algo << "," << m.id << ","
            << format_double(res.report.overall) << ","
            << format_double(p_acc / static_cast<double>(emb.pages.size())) << ","
            << format_double(s_acc / static_cast<double>(emb.pages.size())) << "\n";
      };

      for (double q : grid.jpeg_q)
        run_point("jpeg", format_double(q), [&](const PageImage& p, std::size_t) {
          return jpeg_compress(p, static_cast<int>(q));
        });
      for (double s : grid.noise_sigma)
        run_point("noise", format_double(s), [&](const PageImage& p, std::size_t i) {
          return add_gaussian_noise(p, s, rc.seed + i);
        });
      for (double d : grid.rotate_deg)
        run_point("rotate", format_double(d), [&](const PageImage& p, std::size_t) {
          return correct_skew(rotate(p, d));
        });
      for (const auto& qual : grid.printscreen)
        run_point("printscreen", qual, [&](const PageImage& p, std::size_t i) {
          return print_screen_sim(p, screen_quality_from_name(qual), rc.seed + i);
        });
    }
  }
  if (out_csv.empty())
    std::cout << csv.str();
  else
    write_text(out_csv, csv.str());
  return 0;
}

int cmd_fingerprint_demo(const RunConfig& rc, const std::string& manifest_path, int users,
                         int colluders, double threshold, const std::string& report_path) {
  if (users < 1 || colluders < 1 || colluders > users)
    raise(Errc::ConfigError, "need 1 <= colluders <= users");
  std::vector<PageImage> original;
  if (!manifest_path.empty()) {
    original = load_pages(load_manifest(manifest_path));
  } else {
    CorpusConfig cc;
    cc.documents = 1;
    cc.canon_w = rc.canon_w;
    cc.canon_h = rc.canon_h;
    cc.layout = "text";
    cc.seed = rc.seed;
    original.push_back(generate_page(cc, 0, 0));
  }
  PipelineConfig cfg = make_pipeline(rc);
  FingerprintedCopies fpc = embed_fingerprints(original, cfg, users, rc.seed);

  Rng rng(rc.seed ^ 0xc0111a6eULL);
  std::vector<int> pool(users);
  for (int i = 0; i < users; ++i) pool[i] = i;
  for (int i = users - 1; i > 0; --i) std::swap(pool[i], pool[rng.below(i + 1)]);
  std::vector<int> chosen(pool.begin(), pool.begin() + colluders);
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::vector<PageImage>> docs;
  docs.reserve(chosen.size());
  for (int u : chosen) docs.push_back(fpc.copies[u].pages);
  std::vector<PageImage> colluded = collude_average_docs(docs);

  std::vector<SideInfo> sides;
  sides.reserve(users);
  for (const auto& c : fpc.copies) sides.push_back(c.side);
  CollusionDetection det = detect_colluders(colluded, sides, fpc.fps, threshold);

  nlohmann::json j;
  j["users"] = users;
  j["colluders_true"] = chosen;
  j["colluders_detected"] = det.flagged;
  j["threshold"] = threshold;
  j["per_user_nc"] = det.per_user_nc;
  std::string text = j.dump(2) + "\n";
  if (report_path.empty())
    std::cout << text;
  else
    write_text(report_path, text);
  return 0;
}

int cmd_gen_corpus(const RunConfig& rc, int documents, int pages, const std::string& layout,
                   const std::string& language, bool rgb, bool plain) {
  CorpusConfig cc;
  cc.documents = documents;
  cc.pages_per_doc = pages;
  cc.canon_w = rc.canon_w;
  cc.canon_h = rc.canon_h;
  cc.layout = layout;
  cc.language = language;
  cc.tinted = !plain;
  cc.rgb = rgb;
  cc.seed = rc.seed;
  if (layout != "text" && layout != "mixed" && layout != "figures" && layout != "report")
    raise(Errc::ConfigError, "layout must be text|mixed|figures|report");
  auto manifests = generate_corpus(cc, rc.out);
  std::cout << "wrote " << manifests.size() << " document(s) under " << rc.out << "\n";
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::NoTextureBlocks:
    case Errc::NoContent:
      return 3;
    case Errc::SideInfoMismatch:
    case Errc::PayloadMismatch:
      return 4;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-classified transform-domain document watermarking"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string config_path;

  // --config is handled before CLI11 assigns flag values, so flags override.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  try {
    if (!config_path.empty()) load_config_file(rc, config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key=value or JSON)");
    sub->add_option("--algo", rc.algo, "watermarking algorithm 1..5");
    sub->add_option("--block-side", rc.block_side, "block side (must match the algorithm)");
    sub->add_option("--canon-w", rc.canon_w, "canonical cropped width");
    sub->add_option("--canon-h", rc.canon_h, "canonical cropped height");
    sub->add_option("--gamma1", rc.g1);
    sub->add_option("--gamma2", rc.g2);
    sub->add_option("--gamma3", rc.g3);
    sub->add_option("--gamma4", rc.g4);
    sub->add_option("--pt-coverage", rc.pt_coverage);
    sub->add_option("--alpha-ct", rc.alpha_ct);
    sub->add_option("--alpha-ptpg", rc.alpha_ptpg);
    sub->add_option("--alpha-cg", rc.alpha_cg);
    sub->add_option("--margin-eps", rc.margin_eps);
    sub->add_option("--mark-amplitude", rc.mark_amplitude);
    sub->add_option("--dct-tolerance", rc.dct_tolerance);
    sub->add_option("--dwt-levels", rc.dwt_levels);
    sub->add_option("--watermark", rc.watermark, "watermark image (default: built-in mark)");
    sub->add_option("--out", rc.out, "output directory or file");
    sub->add_option("--seed", rc.seed, "seed for all randomized steps");
  };

  std::string manifest_path, sideinfo_path, report_path, image_path, image_b, spec_path,
      prov_path, grid_path, algos_arg = "1,2,3,4,5", orig_path, suspect_path;
  std::vector<std::string> manifest_paths;
  int users = 100, colluders = 10, documents = 2, pages = 1;
  double threshold = 0.25;
  std::string layout = "mixed", language = "latin";
  bool rgb = false, plain = false;

  CLI::App* embed = app.add_subcommand("embed", "embed a watermark into a document");
  add_common(embed);
  embed->add_option("--manifest", manifest_path, "document manifest JSON")->required();

  CLI::App* extract = app.add_subcommand("extract", "extract and score a watermark");
  add_common(extract);
  extract->add_option("--manifest", manifest_path, "suspect manifest JSON")->required();
  extract->add_option("--sideinfo", sideinfo_path, "side info JSON")->required();
  extract->add_option("--report", report_path, "report path (default: stdout)");

  CLI::App* classify = app.add_subcommand("classify", "classify page blocks");
  add_common(classify);
  classify->add_option("--image", image_path, "page image")->required();
  classify->add_option("--report", report_path, "report path (default: stdout)");

  CLI::App* attack = app.add_subcommand("attack", "apply a digital attack to a page");
  add_common(attack);
  attack->add_option("--image", image_path, "page image")->required();
  attack->add_option("--image-b", image_b, "second page (stitch_pages)");
  attack->add_option("--spec", spec_path, "attack spec JSON")->required();
  attack->add_option("--attacked", report_path, "output image path")->required();
  attack->add_option("--provenance", prov_path, "provenance JSON path");

  CLI::App* evaluate = app.add_subcommand("evaluate", "quality and NC report");
  add_common(evaluate);
  evaluate->add_option("--original", orig_path, "original page or manifest")->required();
  evaluate->add_option("--suspect", suspect_path, "suspect page or manifest")->required();
  evaluate->add_option("--sideinfo", sideinfo_path, "side info for NC scoring");
  evaluate->add_option("--report", report_path, "report path (default: stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "attack grid sweep to CSV");
  add_common(sweep);
  sweep->add_option("--manifest", manifest_paths, "document manifest(s)")->required();
  sweep->add_option("--grid", grid_path, "attack grid JSON")->required();
  sweep->add_option("--algos", algos_arg, "comma-separated algorithm ids");
  sweep->add_option("--csv", report_path, "CSV path (default: stdout)");

  CLI::App* fdemo = app.add_subcommand("fingerprint-demo", "collusion attack demo");
  add_common(fdemo);
  fdemo->add_option("--manifest", manifest_path, "original manifest (default: generated page)");
  fdemo->add_option("--users", users, "number of fingerprinted users");
  fdemo->add_option("--colluders", colluders, "number of colluding users");
  fdemo->add_option("--threshold", threshold, "detection threshold");
  fdemo->add_option("--report", report_path, "report path (default: stdout)");

  CLI::App* gen = app.add_subcommand("gen-corpus", "generate a synthetic document corpus");
  add_common(gen);
  gen->add_option("--documents", documents, "number of documents");
  gen->add_option("--pages", pages, "pages per document");
  gen->add_option("--layout", layout, "text|mixed|figures");
  gen->add_option("--language", language, "latin|cjk|indic");
  gen->add_flag("--rgb", rgb, "emit RGB pages");
  gen->add_flag("--plain", plain, "white paper instead of tinted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc_parse = app.exit(e);
    return rc_parse == 0 ? 0 : 2;
  }

  try {
    if (embed->parsed()) return cmd_embed(rc, manifest_path);
    if (extract->parsed())
      return cmd_extract(rc, manifest_path, sideinfo_path, report_path,
                         extract->count("--algo") > 0);
    if (classify->parsed()) return cmd_classify(rc, image_path, report_path);
    if (attack->parsed())
      return cmd_attack(rc, image_path, image_b, spec_path, report_path, prov_path);
    if (evaluate->parsed())
      return cmd_evaluate(rc, orig_path, suspect_path, sideinfo_path, report_path);
    if (sweep->parsed())
      return cmd_sweep(rc, manifest_paths, grid_path, algos_arg, report_path);
    if (fdemo->parsed())
      return cmd_fingerprint_demo(rc, manifest_path, users, colluders, threshold, report_path);
    if (gen->parsed()) return cmd_gen_corpus(rc, documents, pages, layout, language, rgb, plain);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
