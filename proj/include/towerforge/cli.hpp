#pragma once

#include <string>

#include "json.hpp"
#include "towerforge/curve.hpp"

namespace towerforge {

extern const char* kToolVersion;

// Where curve records come from.  Remote fetches land in the cache and are
// served from it byte for byte afterwards; certificates carry the hash of
// the exact bytes ingested.
struct CurveSource {
  std::string kind = "local-file";  // local-file | remote-database
  std::string location;             // path, or URL template with {label}
  std::string cache_dir;
};

struct IngestedCurve {
  CurveQ curve{0, 0, 0, 0, 0};
  std::string label;
  std::string origin;       // resolved path or URL
  std::string source_hash;  // hash of the raw record bytes
};

// Parses a curve record and recomputes all invariants locally; any claimed
// invariant in the record that disagrees is an error, never a warning.
IngestedCurve parse_curve_record(const std::string& bytes,
                                 const std::string& fallback_label);

IngestedCurve ingest_curve(const CurveSource& src,
                           const std::string& label_or_path);

// Exit codes: 0 certified/valid, 2 indeterminate/evidence-only, 1 error.
int run_cli(int argc, char** argv);

}  // namespace towerforge
