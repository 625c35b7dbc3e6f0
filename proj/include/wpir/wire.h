// Copyright 2026 The wpirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Byte-level wire format. All integers are big-endian.
//
//   frame      := u32 payload_length, payload
//   query      := u8 version (0x01), u8 tag,
//                 Null:       nothing
//                 Clean:      u16 file
//                 Structured: u16 combination_count, then per combination
//                             u8 term_count, then per term
//                             u16 file, u32 segment, coeff
//                 coeff is u8, or u16 when the field has more than 256
//                 elements.
//   answer     := u32 symbol_count, symbols of ceil(w/8) bytes each
//
// The query class is not transmitted; the receiver derives it from the
// payload.
#ifndef WPIR_WIRE_H_
#define WPIR_WIRE_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpir/core.h"
#include "wpir/galois.h"

namespace wpir {

inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kFrameHeaderBytes = 4;
inline constexpr std::uint32_t kMaxFrameBytes = 1u << 30;

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown for a query whose version byte is not kWireVersion.
class VersionMismatch : public WireError {
 public:
  using WireError::WireError;
};

using Bytes = std::vector<std::uint8_t>;

// Throws WireError when a count does not fit its field (more than 65535
// combinations or 255 terms in one combination).
Bytes EncodeQuery(const QueryToken& q, const Field& field);
QueryToken DecodeQuery(std::span<const std::uint8_t> payload, const Field& field);

Bytes EncodeAnswer(const AnswerString& a, const Field& field);
AnswerString DecodeAnswer(std::span<const std::uint8_t> payload,
                          const Field& field);

// Prefixes the 4-byte length.
Bytes Frame(std::span<const std::uint8_t> payload);
// Splits one frame off the front of `buffer`; throws WireError if the buffer
// does not hold exactly one complete frame.
Bytes Unframe(std::span<const std::uint8_t> buffer);

}  // namespace wpir

#endif  // WPIR_WIRE_H_
