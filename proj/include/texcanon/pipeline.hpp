// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_PIPELINE_HPP
#define TEXCANON_PIPELINE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "texcanon/norm_config.hpp"

namespace texcanon {

class PipelineError : public std::runtime_error {
 public:
  enum class Code { RendererUnavailable, JournalCorrupt, IoError, BadRecordFile, BadSetupFile };

  PipelineError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct RenderSetup {
  std::string font_id;
  int dpi = 600;

  bool operator==(const RenderSetup&) const = default;
};

struct InputRecord {
  std::string id;
  std::optional<std::string> formula;     // absent or blank → manual check
  std::optional<std::string> image_path;  // absent or blank image → dropped
};

// Record file: `id<TAB>formula<TAB>imagePath` per line, third field optional;
// setup file: `fontId<WS>dpi` per line, '#' comments. Both throw
// PipelineError(BadRecordFile / BadSetupFile) on malformed lines.
std::vector<InputRecord> load_records(const std::string& path);
std::vector<RenderSetup> load_setups(const std::string& path);

enum class RecordStatus {
  Kept,
  DroppedWhiteImage,
  FlaggedManualCheck,
  DroppedNormalization,
  DroppedRenderError,
  Corrected,  // kept after a supplied correction replaced the formula
};

std::string to_string(RecordStatus status);
std::optional<RecordStatus> record_status_from_string(const std::string& text);

struct SetupOutcome {
  std::string font_id;
  int dpi = 0;
  std::string image_path;  // empty when the render failed
  std::string error;       // empty on success

  bool operator==(const SetupOutcome&) const = default;
};

struct RecordOutcome {
  std::string id;
  RecordStatus status = RecordStatus::Kept;
  std::string detail;                  // drop reason / error description
  std::vector<std::string> gt_tokens;  // canonical form stored with the dataset
  std::string rendering_form;          // string handed to the renderer
  std::vector<SetupOutcome> setups;

  bool operator==(const RecordOutcome&) const = default;
};

struct PipelineReport {
  std::string split_name = "all";
  std::size_t total = 0;
  std::map<RecordStatus, std::size_t> counts;
  std::vector<RecordOutcome> outcomes;  // input order

  std::size_t count(RecordStatus s) const {
    auto it = counts.find(s);
    return it == counts.end() ? 0 : it->second;
  }
};

// Contract: render `formula` for `setup`, write the raster to `out_path`,
// return an empty string on success or a description of the failure.
// `record_id` is context (the mock uses it for programmed failures).
class RendererIface {
 public:
  virtual ~RendererIface() = default;

  // Fail-fast validation; throws PipelineError(RendererUnavailable).
  virtual void check_available() const {}

  virtual std::string render(const std::string& record_id, const std::string& formula,
                             const RenderSetup& setup, const std::string& out_path) = 0;
};

// Deterministic stand-in renderer: emits a small PGM whose pixels derive
// from a hash of (formula, font, dpi), so repeated runs are byte-identical.
// Failures can be programmed per (record id, font id).
class MockRenderer : public RendererIface {
 public:
  void program_failure(const std::string& record_id, const std::string& font_id) {
    failures_.insert({record_id, font_id});
  }

  std::string render(const std::string& record_id, const std::string& formula,
                     const RenderSetup& setup, const std::string& out_path) override;

 private:
  std::set<std::pair<std::string, std::string>> failures_;
};

// Runs an external command per render. The template must contain
// {formula-file} and {out-image}; {font} and {dpi} are substituted when
// present. Success = exit status 0 and the output file exists.
class CommandRenderer : public RendererIface {
 public:
  explicit CommandRenderer(std::string command_template)
      : template_(std::move(command_template)) {}

  void check_available() const override;
  std::string render(const std::string& record_id, const std::string& formula,
                     const RenderSetup& setup, const std::string& out_path) override;

 private:
  std::string template_;
};

struct PipelineOptions {
  std::string out_dir;  // receives images/, journal.jsonl, manual_review.tsv
  bool resume = false;  // replay journaled records instead of reprocessing
  std::size_t jobs = 1;
  std::string split_name = "all";
  std::map<std::string, std::string> corrections;  // record id → fixed formula
};

// Dataset construction: per record, drop on absent/blank image, flag absent/
// blank formulas for manual review (unless corrected), drop normalization
// rejections, render one image per setup in order stopping at the first
// failure. The manifest stores the canonical (GT) form; the renderer
// receives the rendering form (delimiter sizing and column layout kept).
PipelineReport run_pipeline(const std::vector<InputRecord>& records,
                            const std::vector<RenderSetup>& setups, RendererIface& renderer,
                            const NormConfig& cfg, const PipelineOptions& opts);

struct ManifestRow {
  std::string id;
  std::string font_id;
  int dpi = 0;
  std::string image_path;
  std::string canonical_tokens;  // space-joined

  bool operator==(const ManifestRow&) const = default;
};

// Tab-separated, header line first, rows sorted by (id, fontId, dpi); only
// kept/corrected records appear.
void write_manifest(const PipelineReport& report, const std::string& path);
std::vector<ManifestRow> read_manifest(const std::string& path);

std::string report_text(const PipelineReport& report);
std::string report_json(const PipelineReport& report);

}  // namespace texcanon

#endif  // TEXCANON_PIPELINE_HPP
