#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stomo/metrics.hpp"
#include "stomo/solver.hpp"
#include "stomo/types.hpp"

namespace stomo {

// Shortest round-trip decimal formatting for doubles ("inf"/"-inf"/"nan"
// for non-finite values). Every numeric artifact this project writes goes
// through this helper, so identical values produce identical bytes.
std::string fmt_double(double v);

// Inverse of fmt_double; throws ArgumentError on malformed input.
double parse_double(std::string_view s);

// Binary container holding one image or sinogram: an 8-byte magic
// ("STOMO" + 0, 0, format version 1), a little-endian u32 header length, a
// JSON header (kind, dtype, grid placement or scan geometry), then the
// samples as little-endian IEEE f64 in storage order. Readers reject bad
// magic, unknown kinds/dtypes, and length mismatches with IoError.
void write_image(const std::filesystem::path& path, const ImageGrid& img);
ImageGrid read_image(const std::filesystem::path& path);
void write_sinogram(const std::filesystem::path& path, const Sinogram& sino);
Sinogram read_sinogram(const std::filesystem::path& path);

// Convergence trace as RFC-4180 CSV with header
//   k,t,batch_size,alpha_accepted,backtracks,sub_objective,full_objective,grad_map_norm,elapsed_s
// (full_objective cell left empty when telemetry was off).
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<IterationRecord>& trace);

// Metrics report as a two-line CSV (header "re,psnr_db,ssim" + one row) and
// as a human-readable key = value block. The CSV row parses back bit-exactly.
std::string metrics_to_csv(const MetricsReport& r);
MetricsReport metrics_from_csv(const std::string& text);
std::string metrics_to_text(const MetricsReport& r);

// Writes text to path, creating parent directories; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace stomo
