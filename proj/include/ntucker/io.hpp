#pragma once

// Text tensor formats.
//
//   DTF1 d n_1 ... n_d
//   re im                 (one line per entry, flat colexicographic order)
//
//   TKF1 d n_1 ... n_d r_1 ... r_d
//   re im                 (U_1 .. U_d column-major, then the core)
//
// Values are written with 17 significant digits, so a save/load round trip
// is lossless.

#include <filesystem>
#include <iosfwd>

#include "ntucker/tensor.hpp"
#include "ntucker/tucker.hpp"

namespace ntucker {

enum class FileKind { dense, tucker };

void write_dense(std::ostream& os, const DenseTensor& x);
DenseTensor read_dense(std::istream& is);
void write_tucker(std::ostream& os, const TuckerTensor& y);
TuckerTensor read_tucker(std::istream& is);

void save_dense(const DenseTensor& x, const std::filesystem::path& path);
DenseTensor load_dense(const std::filesystem::path& path);
void save_tucker(const TuckerTensor& y, const std::filesystem::path& path);
TuckerTensor load_tucker(const std::filesystem::path& path);

// Reads only the magic word of the header.
FileKind sniff_kind(const std::filesystem::path& path);

}  // namespace ntucker
