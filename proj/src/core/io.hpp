#pragma once

#include <string>

#include "core/surface.hpp"

namespace twolevel {

enum class ExportFormat {
    Csv,    // '#'-prefixed metadata, "x,y,p" records
    Json,   // self-describing document
    Matrix, // gnuplot nonuniform-matrix (splot ... nonuniform matrix)
};

// "csv" | "json" | "matrix"; anything else -> UsageError.
ExportFormat parse_format(const std::string& name);
std::string format_name(ExportFormat f);

// Shortest text form that parses back to the identical double (%.17g).
std::string format_double(double v);

// Serialization is deterministic: export -> import -> export is byte-identical
// and the embedded checksum is verified on import (IoError on mismatch).
std::string export_surface(const Surface& s, ExportFormat f);
Surface import_surface(const std::string& text, ExportFormat f);
void write_surface_file(const Surface& s, const std::string& path, ExportFormat f);
Surface read_surface_file(const std::string& path, ExportFormat f);

std::string export_slice(const SpectralSlice& s, ExportFormat f);
SpectralSlice import_slice(const std::string& text, ExportFormat f);
void write_slice_file(const SpectralSlice& s, const std::string& path, ExportFormat f);
SpectralSlice read_slice_file(const std::string& path, ExportFormat f);

} // namespace twolevel
