#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "docwm/watermark.hpp"

namespace docwm {
namespace {

constexpr const char* kSchemaVersion = "sideinfo_v1";
constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const std::uint8_t* data, std::size_t n) {
  std::string out;
  out.reserve((n + 2) / 3 * 4);
  for (std::size_t i = 0; i < n; i += 3) {
    std::uint32_t v = data[i] << 16;
    if (i + 1 < n) v |= data[i + 1] << 8;
    if (i + 2 < n) v |= data[i + 2];
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back(i + 1 < n ? kB64[(v >> 6) & 63] : '=');
    out.push_back(i + 2 < n ? kB64[v & 63] : '=');
  }
  return out;
}

std::vector<std::uint8_t> b64_decode(const std::string& s) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(s.size() / 4 * 3);
  std::uint32_t buf = 0;
  int bits = 0;
  for (char c : s) {
    if (c == '=') break;
    int v = val(c);
    if (v < 0) raise(Errc::CorruptImage, "invalid base64 in side info");
    buf = (buf << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((buf >> bits) & 0xff));
    }
  }
  return out;
}

// little-endian IEEE doubles
std::string encode_f64(const std::vector<double>& v) {
  std::vector<std::uint8_t> bytes(v.size() * 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t u;
    std::memcpy(&u, &v[i], 8);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<std::uint8_t>(u >> (8 * b));
  }
  return b64_encode(bytes.data(), bytes.size());
}

std::vector<double> decode_f64(const std::string& s) {
  auto bytes = b64_decode(s);
  if (bytes.size() % 8 != 0) raise(Errc::CorruptImage, "truncated f64 array in side info");
  std::vector<double> v(bytes.size() / 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t u = 0;
    for (int b = 7; b >= 0; --b) u = (u << 8) | bytes[i * 8 + b];
    std::memcpy(&v[i], &u, 8);
  }
  return v;
}

nlohmann::json matrix_json(const Matrix& m) {
  return {{"r", m.rows}, {"c", m.cols}, {"d", encode_f64(m.a)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m;
  m.rows = j.at("r").get<int>();
  m.cols = j.at("c").get<int>();
  m.a = decode_f64(j.at("d").get<std::string>());
  if (m.a.size() != static_cast<std::size_t>(m.rows) * m.cols)
    raise(Errc::CorruptImage, "matrix payload size mismatch");
  return m;
}

}  // namespace

void save_sideinfo(const SideInfo& s, const std::string& path) {
  nlohmann::json j;
  j["version"] = kSchemaVersion;
  j["algo"] = static_cast<int>(s.algo);
  j["block_side"] = s.block_side;
  j["canonical"] = {s.canon_w, s.canon_h};
  j["mark_side"] = s.mark_side;
  j["margin_eps"] = s.margin_eps;
  j["auto_deskew"] = s.auto_deskew;
  j["thresholds"] = {{"g1", s.thresholds.g1},
                     {"g2", s.thresholds.g2},
                     {"g3", s.thresholds.g3},
                     {"g4", s.thresholds.g4},
                     {"pt_coverage", s.thresholds.pt_coverage}};
  j["policy"] = {{"CT", s.policy.ct}, {"PTPG", s.policy.ptpg}, {"CG", s.policy.cg}};
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& lvl : s.params.weights.w) weights.push_back({lvl[0], lvl[1], lvl[2], lvl[3]});
  j["params"] = {{"mark_amplitude", s.params.mark_amplitude},
                 {"dwt_levels", s.params.dwt_levels},
                 {"weights", weights},
                 {"svd_rank", s.params.svd_rank},
                 {"dct_coeffs", s.params.dct_coeffs},
                 {"dct_tolerance", s.params.dct_tolerance},
                 {"subband_rank", s.params.subband_rank},
                 {"distortion_window", s.params.distortion_window}};

  j["mark_u"] = matrix_json(s.mark_u);
  j["mark_v"] = matrix_json(s.mark_v);
  j["mark_s"] = encode_f64(s.mark_s);
  for (int t = 0; t < 4; ++t) {
    j["mark_sub_u"].push_back(matrix_json(s.mark_sub_u[t]));
    j["mark_sub_v"].push_back(matrix_json(s.mark_sub_v[t]));
    j["mark_sub_s"].push_back(encode_f64(s.mark_sub_s[t]));
  }

  j["pages"] = nlohmann::json::array();
  for (const auto& p : s.pages) {
    nlohmann::json pj;
    pj["page"] = p.page_index;
    pj["orig"] = {p.orig_width, p.orig_height};
    pj["blank"] = p.blank;
    pj["margins"] = {p.margins.left, p.margins.right, p.margins.top, p.margins.bottom};
    pj["crop"] = {p.crop_width, p.crop_height};
    pj["colp"] = encode_f64(p.col_profile);
    pj["rowp"] = encode_f64(p.row_profile);
    pj["blocks"] = nlohmann::json::array();
    for (const auto& b : p.blocks) {
      nlohmann::json bj;
      bj["index"] = b.index;
      bj["class"] = block_class_name(b.cls);
      bj["alpha"] = b.alpha;
      if (b.dwt) {
        bj["payload"] = {{"ll", matrix_json(b.dwt->ll)},
                         {"lh", matrix_json(b.dwt->lh)},
                         {"hl", matrix_json(b.dwt->hl)},
                         {"hh", matrix_json(b.dwt->hh)}};
      } else if (b.svd) {
        bj["payload"] = {{"s", encode_f64(b.svd->s_c)}};
      } else if (b.dct) {
        bj["payload"] = {{"pos", b.dct->positions}, {"v", encode_f64(b.dct->values)}};
      } else if (b.sub_svd) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& sv : b.sub_svd->s_cl) arr.push_back(encode_f64(sv));
        bj["payload"] = {{"s", arr}};
      }
      pj["blocks"].push_back(std::move(bj));
    }
    j["pages"].push_back(std::move(pj));
  }

  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
  out << j.dump() << "\n";
  if (!out) raise(Errc::IoError, "short write: " + path);
}

SideInfo load_sideinfo(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::FileNotFound, path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::CorruptImage, path + ": " + e.what());
  }
  try {
    if (j.at("version").get<std::string>() != kSchemaVersion)
      raise(Errc::SideInfoMismatch, "unsupported side info schema");
    SideInfo s;
    s.algo = algo_from_int(j.at("algo").get<int>());
    s.block_side = j.at("block_side").get<int>();
    s.canon_w = j.at("canonical")[0].get<int>();
    s.canon_h = j.at("canonical")[1].get<int>();
    s.mark_side = j.at("mark_side").get<int>();
    s.margin_eps = j.at("margin_eps").get<double>();
    s.auto_deskew = j.at("auto_deskew").get<bool>();
    const auto& tj = j.at("thresholds");
    s.thresholds = {tj.at("g1"), tj.at("g2"), tj.at("g3"), tj.at("g4"), tj.at("pt_coverage")};
    const auto& pj = j.at("policy");
    s.policy = {pj.at("CT"), pj.at("PTPG"), pj.at("CG")};
    const auto& prm = j.at("params");
    s.params.mark_amplitude = prm.at("mark_amplitude");
    s.params.dwt_levels = prm.at("dwt_levels");
    s.params.svd_rank = prm.at("svd_rank");
    s.params.dct_coeffs = prm.at("dct_coeffs");
    s.params.dct_tolerance = prm.at("dct_tolerance");
    s.params.subband_rank = prm.at("subband_rank");
    s.params.distortion_window = prm.at("distortion_window");
    s.params.weights.w.clear();
    for (const auto& lvl : prm.at("weights"))
      s.params.weights.w.push_back({lvl[0], lvl[1], lvl[2], lvl[3]});

    s.mark_u = matrix_from_json(j.at("mark_u"));
    s.mark_v = matrix_from_json(j.at("mark_v"));
    s.mark_s = decode_f64(j.at("mark_s").get<std::string>());
    for (int t = 0; t < 4; ++t) {
      s.mark_sub_u[t] = matrix_from_json(j.at("mark_sub_u")[t]);
      s.mark_sub_v[t] = matrix_from_json(j.at("mark_sub_v")[t]);
      s.mark_sub_s[t] = decode_f64(j.at("mark_sub_s")[t].get<std::string>());
    }

    for (const auto& pg : j.at("pages")) {
      PageSideInfo psi;
      psi.page_index = pg.at("page").get<int>();
      psi.orig_width = pg.at("orig")[0].get<int>();
      psi.orig_height = pg.at("orig")[1].get<int>();
      psi.blank = pg.value("blank", false);
      psi.margins = {pg.at("margins")[0].get<int>(), pg.at("margins")[1].get<int>(),
                     pg.at("margins")[2].get<int>(), pg.at("margins")[3].get<int>()};
      psi.crop_width = pg.at("crop")[0].get<int>();
      psi.crop_height = pg.at("crop")[1].get<int>();
      psi.col_profile = decode_f64(pg.at("colp").get<std::string>());
      psi.row_profile = decode_f64(pg.at("rowp").get<std::string>());
      for (const auto& bj : pg.at("blocks")) {
        BlockRecord rec;
        rec.index = bj.at("index").get<int>();
        rec.cls = block_class_from_name(bj.at("class").get<std::string>());
        rec.alpha = bj.at("alpha").get<double>();
        if (bj.contains("payload")) {
          const auto& pl = bj.at("payload");
          switch (s.algo) {
            case AlgoId::Dwt:
              rec.dwt.emplace();
              rec.dwt->ll = matrix_from_json(pl.at("ll"));
              rec.dwt->lh = matrix_from_json(pl.at("lh"));
              rec.dwt->hl = matrix_from_json(pl.at("hl"));
              rec.dwt->hh = matrix_from_json(pl.at("hh"));
              break;
            case AlgoId::Svd:
              rec.svd.emplace();
              rec.svd->s_c = decode_f64(pl.at("s").get<std::string>());
              break;
            case AlgoId::Dct:
              rec.dct.emplace();
              rec.dct->positions = pl.at("pos").get<std::vector<int>>();
              rec.dct->values = decode_f64(pl.at("v").get<std::string>());
              break;
            case AlgoId::DwtSvd:
            case AlgoId::DwtDctSvd:
              rec.sub_svd.emplace();
              for (int t = 0; t < 4; ++t)
                rec.sub_svd->s_cl[t] = decode_f64(pl.at("s")[t].get<std::string>());
              break;
          }
        }
        psi.blocks.push_back(std::move(rec));
      }
      s.pages.push_back(std::move(psi));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::SideInfoMismatch, path + ": malformed side info: " + e.what());
  }
}

}  // namespace docwm
