// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#include "texcanon/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "texcanon/image.hpp"
#include "texcanon/normalizer.hpp"
#include "texcanon/tokenizer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace texcanon {

namespace {

std::string rstrip_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool blank_text(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string sanitize_component(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return out;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json outcome_to_json(const RecordOutcome& oc) {
  json setups = json::array();
  for (const SetupOutcome& s : oc.setups) {
    setups.push_back({{"font", s.font_id},
                      {"dpi", s.dpi},
                      {"image", s.image_path},
                      {"error", s.error}});
  }
  std::string gt;
  for (std::size_t i = 0; i < oc.gt_tokens.size(); ++i) {
    if (i > 0) gt.push_back(' ');
    gt += oc.gt_tokens[i];
  }
  return json{{"id", oc.id},          {"status", to_string(oc.status)},
              {"detail", oc.detail},  {"gt", gt},
              {"rendering", oc.rendering_form}, {"setups", setups}};
}

RecordOutcome outcome_from_json(const json& j, const std::string& path, std::size_t lineno) {
  auto corrupt = [&](const std::string& why) -> PipelineError {
    std::ostringstream msg;
    msg << path << ":" << lineno << ": " << why;
    return PipelineError(PipelineError::Code::JournalCorrupt, msg.str());
  };
  if (!j.is_object() || !j.contains("id") || !j.contains("status")) {
    throw corrupt("journal entry missing id/status");
  }
  RecordOutcome oc;
  oc.id = j.at("id").get<std::string>();
  auto status = record_status_from_string(j.at("status").get<std::string>());
  if (!status) throw corrupt("unknown status '" + j.at("status").get<std::string>() + "'");
  oc.status = *status;
  oc.detail = j.value("detail", "");
  oc.rendering_form = j.value("rendering", "");
  std::istringstream gt(j.value("gt", ""));
  std::string tok;
  while (gt >> tok) oc.gt_tokens.push_back(tok);
  for (const json& s : j.value("setups", json::array())) {
    SetupOutcome so;
    so.font_id = s.value("font", "");
    so.dpi = s.value("dpi", 0);
    so.image_path = s.value("image", "");
    so.error = s.value("error", "");
    oc.setups.push_back(std::move(so));
  }
  return oc;
}

std::map<std::string, RecordOutcome> read_journal(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw PipelineError(PipelineError::Code::IoError, "cannot open journal: " + path);
  }
  std::map<std::string, RecordOutcome> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_text(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": not valid JSON: " << e.what();
      throw PipelineError(PipelineError::Code::JournalCorrupt, msg.str());
    }
    RecordOutcome oc = outcome_from_json(j, path, lineno);
    out[oc.id] = std::move(oc);
  }
  return out;
}

// One record through the Algorithm-1 checks; never throws — every failure
// becomes a status.
RecordOutcome process_record(const InputRecord& record, const std::vector<RenderSetup>& setups,
                             RendererIface& renderer, const NormConfig& cfg,
                             const PipelineOptions& opts) {
  RecordOutcome out;
  out.id = record.id;

  // Source-image check: a record without a usable, non-blank image is
  // unusable ground truth.
  if (!record.image_path || blank_text(*record.image_path)) {
    out.status = RecordStatus::DroppedWhiteImage;
    out.detail = "no source image";
    return out;
  }
  try {
    GrayImage img = load_pgm(*record.image_path);
    if (is_blank(img)) {
      out.status = RecordStatus::DroppedWhiteImage;
      out.detail = "blank source image";
      return out;
    }
  } catch (const ImageError& e) {
    out.status = RecordStatus::DroppedWhiteImage;
    out.detail = e.what();
    return out;
  }

  std::string formula = record.formula.value_or("");
  bool corrected = false;
  auto cit = opts.corrections.find(record.id);
  if (cit != opts.corrections.end()) {
    formula = cit->second;
    corrected = true;
  }
  if (blank_text(formula)) {
    out.status = RecordStatus::FlaggedManualCheck;
    out.detail = "empty formula";
    return out;
  }

  DualOutcome norm = normalize_dual(formula, cfg);
  if (!norm.accepted()) {
    out.status = RecordStatus::DroppedNormalization;
    out.detail = to_string(norm.rejection->reason) + ": " + norm.rejection->detail;
    return out;
  }
  for (const Token& t : norm.gt) out.gt_tokens.push_back(t.text);
  out.rendering_form = detokenize(norm.rendering);

  for (const RenderSetup& setup : setups) {
    std::ostringstream name;
    name << sanitize_component(record.id) << "_" << sanitize_component(setup.font_id) << "_"
         << setup.dpi << ".pgm";
    std::string image_path = (fs::path(opts.out_dir) / "images" / name.str()).string();
    std::string error;
    try {
      error = renderer.render(record.id, out.rendering_form, setup, image_path);
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (!error.empty()) {
      out.setups.push_back({setup.font_id, setup.dpi, "", error});
      out.status = RecordStatus::DroppedRenderError;
      out.detail = "render failed for font " + setup.font_id;
      return out;  // remaining setups are not attempted
    }
    out.setups.push_back({setup.font_id, setup.dpi, image_path, ""});
  }
  out.status = corrected ? RecordStatus::Corrected : RecordStatus::Kept;
  return out;
}

}  // namespace

std::string to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::Kept: return "kept";
    case RecordStatus::DroppedWhiteImage: return "dropped-white-image";
    case RecordStatus::FlaggedManualCheck: return "flagged-manual-check";
    case RecordStatus::DroppedNormalization: return "dropped-normalization";
    case RecordStatus::DroppedRenderError: return "dropped-render-error";
    case RecordStatus::Corrected: return "corrected";
  }
  return "unknown";
}

std::optional<RecordStatus> record_status_from_string(const std::string& text) {
  if (text == "kept") return RecordStatus::Kept;
  if (text == "dropped-white-image") return RecordStatus::DroppedWhiteImage;
  if (text == "flagged-manual-check") return RecordStatus::FlaggedManualCheck;
  if (text == "dropped-normalization") return RecordStatus::DroppedNormalization;
  if (text == "dropped-render-error") return RecordStatus::DroppedRenderError;
  if (text == "corrected") return RecordStatus::Corrected;
  return std::nullopt;
}

std::vector<InputRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw PipelineError(PipelineError::Code::IoError, "cannot open record file: " + path);
  }
  std::vector<InputRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = rstrip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty()) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": expected `id<TAB>formula[<TAB>imagePath]`";
      throw PipelineError(PipelineError::Code::BadRecordFile, msg.str());
    }
    InputRecord rec;
    rec.id = fields[0];
    if (!blank_text(fields[1])) rec.formula = fields[1];
    if (fields.size() == 3 && !blank_text(fields[2])) rec.image_path = fields[2];
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RenderSetup> load_setups(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw PipelineError(PipelineError::Code::IoError, "cannot open setup file: " + path);
  }
  std::vector<RenderSetup> setups;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string font, dpi_text;
    if (!(words >> font)) continue;
    std::string extra;
    long dpi = 0;
    bool ok = bool(words >> dpi_text) && !(words >> extra);
    if (ok) {
      try {
        dpi = std::stol(dpi_text);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok || dpi <= 0) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": expected `fontId dpi` with positive dpi";
      throw PipelineError(PipelineError::Code::BadSetupFile, msg.str());
    }
    setups.push_back({font, int(dpi)});
  }
  return setups;
}

std::string MockRenderer::render(const std::string& record_id, const std::string& formula,
                                 const RenderSetup& setup, const std::string& out_path) {
  if (failures_.count({record_id, setup.font_id})) {
    return "programmed failure for (" + record_id + ", " + setup.font_id + ")";
  }
  std::uint64_t h =
      fnv1a(formula + '\x1f' + setup.font_id + '\x1f' + std::to_string(setup.dpi));
  GrayImage img;
  img.width = 48;
  img.height = 24;
  img.pixels.resize(img.width * img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    std::uint64_t v = h ^ (0x9E3779B97F4A7C15ULL * (i + 1));
    v ^= v >> 33;
    img.pixels[i] = std::uint8_t(v & 0xFF);
  }
  img.pixels[0] = 0;  // guarantee non-blank output
  try {
    save_pgm(img, out_path);
  } catch (const ImageError& e) {
    return e.what();
  }
  return "";
}

void CommandRenderer::check_available() const {
  if (template_.find("{formula-file}") == std::string::npos ||
      template_.find("{out-image}") == std::string::npos) {
    throw PipelineError(
        PipelineError::Code::RendererUnavailable,
        "renderer command template must contain {formula-file} and {out-image}");
  }
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

void replace_all(std::string* s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s->find(from, pos)) != std::string::npos) {
    s->replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace

std::string CommandRenderer::render(const std::string& /*record_id*/, const std::string& formula,
                                    const RenderSetup& setup, const std::string& out_path) {
  std::string formula_file = out_path + ".tex";
  {
    std::ofstream f(formula_file);
    if (!f) return "cannot write formula file: " + formula_file;
    f << formula << "\n";
  }
  std::string cmd = template_;
  replace_all(&cmd, "{formula-file}", shell_quote(formula_file));
  replace_all(&cmd, "{font}", shell_quote(setup.font_id));
  replace_all(&cmd, "{dpi}", std::to_string(setup.dpi));
  replace_all(&cmd, "{out-image}", shell_quote(out_path));
  int rc = std::system(cmd.c_str());
  if (rc != 0) {
    return "renderer command exited with status " + std::to_string(rc);
  }
  if (!fs::exists(out_path)) {
    return "renderer command reported success but wrote no output image";
  }
  return "";
}

PipelineReport run_pipeline(const std::vector<InputRecord>& records,
                            const std::vector<RenderSetup>& setups, RendererIface& renderer,
                            const NormConfig& cfg, const PipelineOptions& opts) {
  renderer.check_available();
  std::error_code ec;
  fs::create_directories(fs::path(opts.out_dir) / "images", ec);
  if (ec) {
    throw PipelineError(PipelineError::Code::IoError,
                        "cannot create output directory: " + opts.out_dir);
  }

  const std::string journal_path = (fs::path(opts.out_dir) / "journal.jsonl").string();
  std::map<std::string, RecordOutcome> journaled;
  if (opts.resume && fs::exists(journal_path)) journaled = read_journal(journal_path);

  std::ofstream journal(journal_path,
                        opts.resume ? (std::ios::out | std::ios::app) : std::ios::out);
  if (!journal) {
    throw PipelineError(PipelineError::Code::IoError, "cannot open journal: " + journal_path);
  }

  std::vector<RecordOutcome> outcomes(records.size());
  std::vector<char> pending(records.size(), 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto it = journaled.find(records[i].id);
    if (it != journaled.end()) {
      outcomes[i] = it->second;
      pending[i] = 0;
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex io_mu;
  auto work = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      if (!pending[i]) continue;
      RecordOutcome oc = process_record(records[i], setups, renderer, cfg, opts);
      std::lock_guard<std::mutex> lock(io_mu);
      journal << outcome_to_json(oc).dump() << "\n";
      journal.flush();
      outcomes[i] = std::move(oc);
    }
  };
  if (opts.jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < opts.jobs; ++t) workers.emplace_back(work);
    for (std::thread& t : workers) t.join();
  }
  if (!journal.good()) {
    throw PipelineError(PipelineError::Code::IoError, "journal write failed: " + journal_path);
  }

  // Manual-review export, regenerated from the complete outcome set.
  const std::string review_path = (fs::path(opts.out_dir) / "manual_review.tsv").string();
  std::ofstream review(review_path);
  for (const RecordOutcome& oc : outcomes) {
    if (oc.status == RecordStatus::FlaggedManualCheck) {
      review << oc.id << "\t" << oc.detail << "\n";
    }
  }

  PipelineReport report;
  report.split_name = opts.split_name;
  report.total = records.size();
  for (RecordOutcome& oc : outcomes) report.counts[oc.status]++;
  report.outcomes = std::move(outcomes);
  return report;
}

void write_manifest(const PipelineReport& report, const std::string& path) {
  std::vector<ManifestRow> rows;
  for (const RecordOutcome& oc : report.outcomes) {
    if (oc.status != RecordStatus::Kept && oc.status != RecordStatus::Corrected) continue;
    std::string tokens;
    for (std::size_t i = 0; i < oc.gt_tokens.size(); ++i) {
      if (i > 0) tokens.push_back(' ');
      tokens += oc.gt_tokens[i];
    }
    for (const SetupOutcome& s : oc.setups) {
      rows.push_back({oc.id, s.font_id, s.dpi, s.image_path, tokens});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ManifestRow& a, const ManifestRow& b) {
    if (a.id != b.id) return a.id < b.id;
    if (a.font_id != b.font_id) return a.font_id < b.font_id;
    return a.dpi < b.dpi;
  });
  std::ofstream out(path);
  if (!out) {
    throw PipelineError(PipelineError::Code::IoError, "cannot write manifest: " + path);
  }
  out << "id\tfontId\tdpi\timagePath\tcanonicalTokens\n";
  for (const ManifestRow& r : rows) {
    out << r.id << "\t" << r.font_id << "\t" << r.dpi << "\t" << r.image_path << "\t"
        << r.canonical_tokens << "\n";
  }
  if (!out.good()) {
    throw PipelineError(PipelineError::Code::IoError, "manifest write failed: " + path);
  }
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw PipelineError(PipelineError::Code::IoError, "cannot open manifest: " + path);
  }
  std::string line;
  if (!std::getline(in, line) ||
      rstrip_cr(line) != "id\tfontId\tdpi\timagePath\tcanonicalTokens") {
    throw PipelineError(PipelineError::Code::IoError, path + ": missing manifest header");
  }
  std::vector<ManifestRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = rstrip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 5) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": expected 5 tab-separated fields";
      throw PipelineError(PipelineError::Code::IoError, msg.str());
    }
    ManifestRow row;
    row.id = fields[0];
    row.font_id = fields[1];
    try {
      row.dpi = std::stoi(fields[2]);
    } catch (const std::exception&) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": dpi is not an integer";
      throw PipelineError(PipelineError::Code::IoError, msg.str());
    }
    row.image_path = fields[3];
    row.canonical_tokens = fields[4];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string report_text(const PipelineReport& report) {
  std::ostringstream out;
  out << "split: " << report.split_name << "\n";
  auto row = [&out](const char* label, std::size_t value) {
    out << "  " << std::left << std::setw(22) << label << std::right << std::setw(8) << value
        << "\n";
  };
  row("white image", report.count(RecordStatus::DroppedWhiteImage));
  row("empty ME (manual)", report.count(RecordStatus::FlaggedManualCheck));
  row("normalization", report.count(RecordStatus::DroppedNormalization));
  row("rendering errors", report.count(RecordStatus::DroppedRenderError));
  row("corrected", report.count(RecordStatus::Corrected));
  row("kept", report.count(RecordStatus::Kept));
  row("total", report.total);
  return out.str();
}

std::string report_json(const PipelineReport& report) {
  json counts;
  for (RecordStatus s :
       {RecordStatus::Kept, RecordStatus::DroppedWhiteImage, RecordStatus::FlaggedManualCheck,
        RecordStatus::DroppedNormalization, RecordStatus::DroppedRenderError,
        RecordStatus::Corrected}) {
    counts[to_string(s)] = report.count(s);
  }
  json j{{"split", report.split_name}, {"total", report.total}, {"counts", counts}};
  return j.dump(2);
}

}  // namespace texcanon
