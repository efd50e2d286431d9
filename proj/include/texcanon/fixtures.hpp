// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_FIXTURES_HPP
#define TEXCANON_FIXTURES_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace texcanon {

// One generated test case. `expected_canonical` is computed by construction
// while the expression is built — independently of the normalizer — so it
// serves as an oracle for the canonicalization pipeline (default tables,
// GT serialization). The variants must canonicalize to the same tokens:
// `braced_variant` wraps one complete subtree in redundant braces;
// `script_variant` reorders script attachments (keeping the relative order
// of subscripts and of superscripts, which the merge rule preserves).
struct FixtureCase {
  std::string source;
  std::string braced_variant;
  std::string script_variant;
  std::vector<std::string> expected_canonical;
};

class FixtureGen {
 public:
  explicit FixtureGen(std::uint64_t seed) : rng_(static_cast<std::mt19937::result_type>(seed)) {}

  FixtureCase next(std::size_t max_depth = 3);

 private:
  std::mt19937 rng_;
};

// Writes sources.txt, canonical.txt, braced.txt and scripts.txt (one case
// per line, files line-aligned) into out_dir. The same seed yields
// byte-identical files on every platform: sampling uses the fixed mt19937
// engine directly, never implementation-defined distributions.
void write_fixture_files(std::uint64_t seed, std::size_t count, const std::string& out_dir);

}  // namespace texcanon

#endif  // TEXCANON_FIXTURES_HPP
