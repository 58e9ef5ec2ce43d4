#include "articugeo/recon_losses.hpp"

#include <cstdio>
#include <sstream>

namespace articugeo {

bool LossWeights::is_valid() const {
  for (double w : {temporal, spatial, spatiotemporal, mvrc, sdc, smoothness, nc, snc, pnc,
                   camera_height, vpc}) {
    if (!(w >= 0.0)) return false;
  }
  return alpha >= 0.0 && alpha <= 1.0;
}

const char* term_name(LossTerm term) {
  switch (term) {
    case LossTerm::kPhotoTemporal: return "photo_T";
    case LossTerm::kPhotoSpatial: return "photo_S";
    case LossTerm::kPhotoSpatioTemporal: return "photo_ST";
    case LossTerm::kPhotoMvrc: return "photo_MVRC";
    case LossTerm::kSdc: return "sdc";
    case LossTerm::kSmoothness: return "smooth";
    case LossTerm::kNc: return "nc";
    case LossTerm::kSnc: return "snc";
    case LossTerm::kPncTemporal: return "pnc_T";
    case LossTerm::kPncSpatial: return "pnc_S";
    case LossTerm::kPncSpatioTemporal: return "pnc_ST";
    case LossTerm::kPncMvrc: return "pnc_MVRC";
    case LossTerm::kCameraHeight: return "ch";
    case LossTerm::kVpc: return "vpc";
  }
  return "unknown";
}

double term_weight(LossTerm term, const LossWeights& w) {
  switch (term) {
    case LossTerm::kPhotoTemporal: return w.temporal;
    case LossTerm::kPhotoSpatial: return w.spatial;
    case LossTerm::kPhotoSpatioTemporal: return w.spatiotemporal;
    case LossTerm::kPhotoMvrc: return w.mvrc;
    case LossTerm::kSdc: return w.sdc;
    case LossTerm::kSmoothness: return w.smoothness;
    case LossTerm::kNc: return w.nc;
    case LossTerm::kSnc: return w.snc;
    case LossTerm::kPncTemporal:
    case LossTerm::kPncSpatial:
    case LossTerm::kPncSpatioTemporal:
    case LossTerm::kPncMvrc: return w.pnc;
    case LossTerm::kCameraHeight: return w.camera_height;
    case LossTerm::kVpc: return w.vpc;
  }
  return 0.0;
}

LossReport aggregate(const std::vector<TermResult>& terms, const LossWeights& weights,
                     const std::vector<BreakdownResult>& breakdown) {
  require(weights.is_valid(), ErrorCode::kInvalidArgument, "aggregate: invalid weights");
  LossReport report;
  for (const auto& t : terms) {
    LossEntry e;
    e.name = term_name(t.term);
    e.value = t.value.present() ? t.value.value : 0.0;
    e.count = t.value.count;
    e.weight = term_weight(t.term, weights);
    if (e.present()) report.total += e.weight * e.value;
    report.entries.push_back(e);
  }
  for (const auto& b : breakdown) {
    LossEntry e;
    e.name = b.name;
    e.value = b.value.present() ? b.value.value : 0.0;
    e.count = b.value.count;
    e.weighted = false;
    report.entries.push_back(e);
  }
  return report;
}

const LossEntry* LossReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string LossReport::to_text() const {
  std::string out;
  char buf[160];
  std::size_t total_count = 0;
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%s %.17g %zu\n", e.name.c_str(), e.value, e.count);
    out += buf;
    if (e.weighted) total_count += e.count;
  }
  std::snprintf(buf, sizeof(buf), "total %.17g %zu\n", total, total_count);
  out += buf;
  return out;
}

LossReport LossReport::from_text(const std::string& text) {
  LossReport report;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    LossEntry e;
    if (!(ls >> e.name >> e.value >> e.count)) {
      throw Error(ErrorCode::kParse, "loss report line " + std::to_string(lineno) + ": expected 'name value count'");
    }
    if (e.name == "total") {
      report.total = e.value;
      continue;
    }
    e.weighted = e.name.find('.') == std::string::npos;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace articugeo
