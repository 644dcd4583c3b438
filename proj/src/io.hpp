#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sedlab/core.hpp"

namespace sedlab::io {

/// Appends arrays as raw little-endian float64 (host order; x86-64 and
/// aarch64 are both little-endian) and writes a JSON sidecar.
inline void write_binary_with_sidecar(const std::string& stem,
                                      const std::vector<const std::vector<double>*>& arrays,
                                      nlohmann::ordered_json sidecar) {
  static_assert(sizeof(double) == 8);
  std::ofstream bin(stem + ".bin", std::ios::binary);
  if (!bin) throw Error(ErrorKind::Io, "cannot write " + stem + ".bin");
  for (const auto* a : arrays) {
    bin.write(reinterpret_cast<const char*>(a->data()),
              static_cast<std::streamsize>(a->size() * sizeof(double)));
  }
  std::ofstream meta(stem + ".json");
  if (!meta) throw Error(ErrorKind::Io, "cannot write " + stem + ".json");
  sidecar["dtype"] = "float64-le";
  meta << sidecar.dump(2) << "\n";
}

}  // namespace sedlab::io
