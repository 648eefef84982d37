// Copyright 2026 The PIR-CSI Authors
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

#ifndef PIRCSI_WIRE_H_
#define PIRCSI_WIRE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pircsi/field.h"
#include "pircsi/query.h"

namespace pircsi {

// Query payload:
//   model (u8: 1 = I, 2 = II) | case tag (u8) | n (u16)
//   n times: size (u16) | size indices (u32, 1-based) | size coefficients
// Answer payload:
//   count (u16) | count elements
// Elements use the canonical encoding: m little-endian u16 coefficients,
// lowest degree first. All integers are little-endian.

inline constexpr size_t kQueryHeaderBytes = 4;
inline constexpr size_t kAnswerHeaderBytes = 2;
// Frames larger than this are rejected before any allocation.
inline constexpr uint32_t kMaxFramePayload = 64u << 20;

// Parse errors are InvalidArgument statuses carrying the byte offset of the
// failure both in the message and as a status payload.
absl::Status ParseError(size_t offset, absl::string_view message);
// Offset attached by ParseError, if any.
std::optional<size_t> ParseErrorOffset(const absl::Status& status);

class ByteWriter {
 public:
  void U8(uint8_t v) { bytes_.push_back(v); }
  void U16(uint16_t v);
  void U32(uint32_t v);
  void Element(const FieldElement& e);
  void Raw(std::span<const uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }

  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

// Bounds-checked little-endian reader; every failure is a ParseError at the
// offset where the read started.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  absl::StatusOr<uint8_t> U8(absl::string_view what);
  absl::StatusOr<uint16_t> U16(absl::string_view what);
  absl::StatusOr<uint32_t> U32(absl::string_view what);
  absl::StatusOr<FieldElement> Element(const FieldParamsPtr& params);

  size_t offset() const { return offset_; }
  size_t remaining() const { return bytes_.size() - offset_; }

 private:
  absl::Status Need(size_t n, absl::string_view what) const;

  std::span<const uint8_t> bytes_;
  size_t offset_ = 0;
};

std::vector<uint8_t> EncodeElement(const FieldElement& e);

// Deterministic: equal queries encode to identical bytes.
std::vector<uint8_t> EncodeQuery(const Query& query);
// Total on arbitrary input. Rejects truncation, trailing bytes, unknown tags,
// index 0, zero or non-base coefficients, coefficients >= q, and size fields
// that overrun the payload. Range and shape checks against a database are
// left to ValidateQuery.
absl::StatusOr<Query> DecodeQuery(std::span<const uint8_t> bytes, const FieldParamsPtr& params);

std::vector<uint8_t> EncodeAnswer(const Answer& answer);
absl::StatusOr<Answer> DecodeAnswer(std::span<const uint8_t> bytes, const FieldParamsPtr& params);

enum class MessageType : uint8_t {
  kQuery = 0x01,
  kAnswer = 0x02,
  kError = 0x03,
  kHello = 0x04,
};

// type (u8) | length (u32) | payload
struct Frame {
  MessageType type = MessageType::kHello;
  std::vector<uint8_t> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr size_t kFrameHeaderBytes = 5;

std::vector<uint8_t> EncodeFrame(const Frame& frame);
// Decodes exactly one frame occupying all of `bytes`.
absl::StatusOr<Frame> DecodeFrame(std::span<const uint8_t> bytes);
// Validates a frame header; returns the payload length it announces.
absl::StatusOr<uint32_t> DecodeFrameHeader(std::span<const uint8_t> header, MessageType* type);

// HELLO payload sent by the server: q, m, K as u32.
struct DatabaseInfo {
  uint32_t q = 0;
  uint32_t m = 0;
  uint32_t num_messages = 0;
};

std::vector<uint8_t> EncodeHello(const DatabaseInfo& info);
absl::StatusOr<DatabaseInfo> DecodeHello(std::span<const uint8_t> bytes);

}  // namespace pircsi

#endif  // PIRCSI_WIRE_H_
