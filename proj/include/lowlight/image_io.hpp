// Copyright (c) the lowlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOWLIGHT_IMAGE_IO_HPP_
#define LOWLIGHT_IMAGE_IO_HPP_

#include <string>

#include "lowlight/image.hpp"

namespace lowlight {

// Supported codecs: PNG (8/16-bit, any libpng-readable layout, alpha dropped)
// and binary PPM (P6, maxval up to 65535). Samples are scaled to [0,1] by the
// format's max sample value.
//
// Failure modes are reported distinctly:
//   kIoFailure          the file cannot be opened or read
//   kUnsupportedFormat  magic bytes are neither PNG nor P6
//   kCorruptData        recognized format, broken header or truncated payload
RgbImage load_image(const std::string& path);

/// Writes an 8-bit RGB PNG; sample k is stored as round(clamp(k,0,1)*255).
void save_image(const RgbImage& img, const std::string& path);

/// Writes a single plane as an 8-bit grayscale PNG, same quantization.
void save_plane_png(const PlaneF& plane, const std::string& path);

}  // namespace lowlight

#endif  // LOWLIGHT_IMAGE_IO_HPP_
