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

#include "pircsi/wire.h"

#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "pircsi/status_macros.h"

namespace pircsi {
namespace {

constexpr absl::string_view kOffsetPayloadUrl = "pircsi/parse-offset";

}  // namespace

absl::Status ParseError(size_t offset, absl::string_view message) {
  absl::Status status = absl::InvalidArgumentError(absl::StrCat("byte ", offset, ": ", message));
  status.SetPayload(kOffsetPayloadUrl, absl::Cord(absl::StrCat(offset)));
  return status;
}

std::optional<size_t> ParseErrorOffset(const absl::Status& status) {
  auto payload = status.GetPayload(kOffsetPayloadUrl);
  if (!payload) return std::nullopt;
  size_t offset;
  if (!absl::SimpleAtoi(std::string(*payload), &offset)) return std::nullopt;
  return offset;
}

void ByteWriter::U16(uint16_t v) {
  bytes_.push_back(static_cast<uint8_t>(v));
  bytes_.push_back(static_cast<uint8_t>(v >> 8));
}

void ByteWriter::U32(uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) bytes_.push_back(static_cast<uint8_t>(v >> shift));
}

void ByteWriter::Element(const FieldElement& e) {
  for (uint32_t c : e.coeffs()) U16(static_cast<uint16_t>(c));
}

absl::Status ByteReader::Need(size_t n, absl::string_view what) const {
  if (remaining() < n) {
    return ParseError(offset_, absl::StrCat("truncated input while reading ", what, " (need ", n,
                                            " bytes, have ", remaining(), ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<uint8_t> ByteReader::U8(absl::string_view what) {
  PIRCSI_RETURN_IF_ERROR(Need(1, what));
  return bytes_[offset_++];
}

absl::StatusOr<uint16_t> ByteReader::U16(absl::string_view what) {
  PIRCSI_RETURN_IF_ERROR(Need(2, what));
  const uint16_t v = static_cast<uint16_t>(bytes_[offset_] | (bytes_[offset_ + 1] << 8));
  offset_ += 2;
  return v;
}

absl::StatusOr<uint32_t> ByteReader::U32(absl::string_view what) {
  PIRCSI_RETURN_IF_ERROR(Need(4, what));
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[offset_ + i];
  offset_ += 4;
  return v;
}

absl::StatusOr<FieldElement> ByteReader::Element(const FieldParamsPtr& params) {
  const size_t start = offset_;
  PIRCSI_RETURN_IF_ERROR(Need(2 * size_t{params->m()}, "field element"));
  std::vector<uint32_t> coeffs(params->m());
  for (auto& c : coeffs) {
    c = *U16("coefficient");
    if (c >= params->q()) {
      return ParseError(start, absl::StrCat("coefficient ", c, " is not below q = ", params->q()));
    }
  }
  return *FieldElement::FromCoefficients(params, std::move(coeffs));
}

std::vector<uint8_t> EncodeElement(const FieldElement& e) {
  ByteWriter w;
  w.Element(e);
  return w.Take();
}

std::vector<uint8_t> EncodeQuery(const Query& query) {
  ByteWriter w;
  w.U8(static_cast<uint8_t>(query.model));
  w.U8(static_cast<uint8_t>(query.case_tag));
  w.U16(static_cast<uint16_t>(query.sets.size()));
  for (const QuerySet& s : query.sets) {
    w.U16(static_cast<uint16_t>(s.indices.size()));
    for (MessageIndex i : s.indices) w.U32(i);
    for (const FieldElement& c : s.coeffs) w.Element(c);
  }
  return w.Take();
}

absl::StatusOr<Query> DecodeQuery(std::span<const uint8_t> bytes, const FieldParamsPtr& params) {
  ByteReader r(bytes);
  Query q;
  PIRCSI_ASSIGN_OR_RETURN(uint8_t model, r.U8("model tag"));
  if (model != 1 && model != 2) {
    return ParseError(0, absl::StrCat("unknown model tag ", int{model}));
  }
  q.model = static_cast<Model>(model);
  PIRCSI_ASSIGN_OR_RETURN(uint8_t tag, r.U8("case tag"));
  if (tag > 4 || (q.model == Model::kI && tag != 0)) {
    return ParseError(1, absl::StrCat("invalid case tag ", int{tag}, " for model ", ModelName(q.model)));
  }
  q.case_tag = static_cast<CaseTag>(tag);
  PIRCSI_ASSIGN_OR_RETURN(uint16_t n, r.U16("set count"));
  // Each set needs at least its 2-byte size field.
  if (size_t{n} * 2 > r.remaining()) {
    return ParseError(2, absl::StrCat("set count ", n, " exceeds the payload"));
  }
  q.sets.resize(n);
  const size_t element_bytes = 2 * size_t{params->m()};
  for (QuerySet& s : q.sets) {
    const size_t size_offset = r.offset();
    PIRCSI_ASSIGN_OR_RETURN(uint16_t size, r.U16("set size"));
    if (size_t{size} * (4 + element_bytes) > r.remaining()) {
      return ParseError(size_offset, absl::StrCat("set size ", size, " exceeds the payload"));
    }
    s.indices.reserve(size);
    for (uint16_t j = 0; j < size; ++j) {
      const size_t at = r.offset();
      PIRCSI_ASSIGN_OR_RETURN(uint32_t index, r.U32("index"));
      if (index == 0) return ParseError(at, "message index 0 (indices are 1-based)");
      s.indices.push_back(index);
    }
    s.coeffs.reserve(size);
    for (uint16_t j = 0; j < size; ++j) {
      const size_t at = r.offset();
      PIRCSI_ASSIGN_OR_RETURN(FieldElement c, r.Element(params));
      if (c.IsZero()) return ParseError(at, "zero coefficient");
      if (!c.IsBase()) return ParseError(at, "coefficient outside the base field");
      s.coeffs.push_back(std::move(c));
    }
  }
  if (r.remaining() != 0) {
    return ParseError(r.offset(), absl::StrCat(r.remaining(), " trailing bytes after query"));
  }
  return q;
}

std::vector<uint8_t> EncodeAnswer(const Answer& answer) {
  ByteWriter w;
  w.U16(static_cast<uint16_t>(answer.values.size()));
  for (const FieldElement& v : answer.values) w.Element(v);
  return w.Take();
}

absl::StatusOr<Answer> DecodeAnswer(std::span<const uint8_t> bytes, const FieldParamsPtr& params) {
  ByteReader r(bytes);
  PIRCSI_ASSIGN_OR_RETURN(uint16_t count, r.U16("answer count"));
  if (size_t{count} * 2 * params->m() != r.remaining()) {
    return ParseError(2, absl::StrCat("answer of ", count, " elements needs ",
                                      size_t{count} * 2 * params->m(), " bytes, found ",
                                      r.remaining()));
  }
  Answer a;
  a.values.reserve(count);
  for (uint16_t i = 0; i < count; ++i) {
    PIRCSI_ASSIGN_OR_RETURN(FieldElement v, r.Element(params));
    a.values.push_back(std::move(v));
  }
  return a;
}

std::vector<uint8_t> EncodeFrame(const Frame& frame) {
  ByteWriter w;
  w.U8(static_cast<uint8_t>(frame.type));
  w.U32(static_cast<uint32_t>(frame.payload.size()));
  w.Raw(frame.payload);
  return w.Take();
}

absl::StatusOr<uint32_t> DecodeFrameHeader(std::span<const uint8_t> header, MessageType* type) {
  ByteReader r(header);
  PIRCSI_ASSIGN_OR_RETURN(uint8_t t, r.U8("frame type"));
  if (t < 0x01 || t > 0x04) return ParseError(0, absl::StrCat("unknown frame type ", int{t}));
  PIRCSI_ASSIGN_OR_RETURN(uint32_t length, r.U32("frame length"));
  if (length > kMaxFramePayload) {
    return ParseError(1, absl::StrCat("frame length ", length, " exceeds the limit"));
  }
  *type = static_cast<MessageType>(t);
  return length;
}

absl::StatusOr<Frame> DecodeFrame(std::span<const uint8_t> bytes) {
  Frame f;
  PIRCSI_ASSIGN_OR_RETURN(uint32_t length, DecodeFrameHeader(bytes, &f.type));
  const size_t available = bytes.size() - kFrameHeaderBytes;
  if (available != length) {
    return ParseError(kFrameHeaderBytes, absl::StrCat("frame announces ", length,
                                                      " payload bytes, found ", available));
  }
  f.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
  return f;
}

std::vector<uint8_t> EncodeHello(const DatabaseInfo& info) {
  ByteWriter w;
  w.U32(info.q);
  w.U32(info.m);
  w.U32(info.num_messages);
  return w.Take();
}

absl::StatusOr<DatabaseInfo> DecodeHello(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  DatabaseInfo info;
  PIRCSI_ASSIGN_OR_RETURN(info.q, r.U32("q"));
  PIRCSI_ASSIGN_OR_RETURN(info.m, r.U32("m"));
  PIRCSI_ASSIGN_OR_RETURN(info.num_messages, r.U32("K"));
  if (r.remaining() != 0) return ParseError(r.offset(), "trailing bytes after hello");
  return info;
}

}  // namespace pircsi
