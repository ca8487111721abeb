#pragma once

namespace citeintent {

inline constexpr const char* kToolVersion = "0.1.0";

// Format versions for serialized artifacts.
inline constexpr int kVerbalizerFileVersion = 1;
inline constexpr int kCorpusManifestVersion = 1;
inline constexpr int kEvalReportVersion = 1;
inline constexpr int kCheckpointVersion = 1;

// Versions of the shipped resource tables.
inline constexpr const char* kLabelAliasVersion = "labels-1";
inline constexpr const char* kSectionAliasVersion = "sections-1";
inline constexpr const char* kAnchorTableVersion = "anchors-1";
inline constexpr const char* kStopwordListVersion = "stopwords-1";

}  // namespace citeintent
