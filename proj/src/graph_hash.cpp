// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include <openssl/evp.h>

#include <array>
#include <memory>
#include <stdexcept>

#include "tcscore/dataset_stats.hpp"

namespace tcscore {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace

std::string normalize_source(std::string_view src) {
  std::string out;
  out.reserve(src.size());
  bool pending_space = false;

  const auto emit = [&](char c) {
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += c;
  };

  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (is_space(c)) {
      pending_space = true;
      ++i;
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      pending_space = true;
    } else if (c == '\'' || c == '"') {
      // String literal, single or triple quoted, copied verbatim. An
      // unterminated literal runs to the end of the input.
      const bool triple = i + 2 < src.size() && src[i + 1] == c && src[i + 2] == c;
      const std::size_t quote_len = triple ? 3 : 1;
      for (std::size_t q = 0; q < quote_len; ++q) emit(src[i++]);
      while (i < src.size()) {
        if (src[i] == '\\' && i + 1 < src.size()) {
          out += src[i++];
          out += src[i++];
          continue;
        }
        if (triple ? (src.compare(i, 3, std::string(3, c)) == 0) : src[i] == c) {
          for (std::size_t q = 0; q < quote_len; ++q) out += src[i++];
          break;
        }
        out += src[i++];
      }
    } else {
      emit(c);
      ++i;
    }
  }
  return out;
}

std::string canonical_hash_bytes(const HashInput& input) {
  const std::string source = normalize_source(input.normalized_source);
  std::string bytes = "tcscore-graph-hash-v1\n";
  bytes += "source " + std::to_string(source.size()) + "\n" + source + "\n";
  bytes += "topology " + std::to_string(input.topology.size()) + "\n";
  for (const TopoNode& node : input.topology) {
    bytes += std::to_string(node.op_type.size()) + ":" + node.op_type + "(";
    for (std::size_t k = 0; k < node.inputs.size(); ++k) {
      if (k > 0) bytes += ",";
      bytes += std::to_string(node.inputs[k]);
    }
    bytes += ")\n";
  }
  return bytes;
}

std::string graph_hash(const HashInput& input) {
  if (input.topology.empty()) throw std::invalid_argument("graph_hash: empty topology");
  return sha256_hex(canonical_hash_bytes(input));
}

}  // namespace tcscore
