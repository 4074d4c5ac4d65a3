// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <system_error>

namespace tcscore {

void CompensatedSum::add(double value) noexcept {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

double geometric_mean(std::span<const double> values) {
  if (values.empty()) return 1.0;
  CompensatedSum logs;
  for (double v : values) logs.add(std::log(v));
  return std::exp(logs.value() / static_cast<double>(values.size()));
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  if (decimals < 0 || decimals > 17) throw std::invalid_argument("format_fixed: decimals out of range");

  // glibc prints the exact decimal expansion; 60 fractional digits are enough
  // to tell a true tie from a near-tie for the magnitudes we render.
  char buf[512];
  const int len = std::snprintf(buf, sizeof buf, "%.60f", std::abs(value));
  std::string digits(buf, static_cast<std::size_t>(len));
  const std::size_t dot = digits.find('.');
  std::string integral = digits.substr(0, dot);
  std::string fraction = digits.substr(dot + 1);

  const bool round_up = fraction[static_cast<std::size_t>(decimals)] >= '5';
  std::string kept = integral + fraction.substr(0, static_cast<std::size_t>(decimals));
  if (round_up) {
    int i = static_cast<int>(kept.size()) - 1;
    while (i >= 0 && kept[static_cast<std::size_t>(i)] == '9') kept[static_cast<std::size_t>(i--)] = '0';
    if (i < 0) {
      kept.insert(kept.begin(), '1');
    } else {
      ++kept[static_cast<std::size_t>(i)];
    }
  }
  const std::size_t int_len = kept.size() - static_cast<std::size_t>(decimals);
  std::string out = kept.substr(0, int_len);
  if (decimals > 0) out += "." + kept.substr(int_len);

  const bool all_zero = out.find_first_not_of("0.") == std::string::npos;
  if (std::signbit(value) && !all_zero) out.insert(out.begin(), '-');
  return out;
}

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc{}) throw std::runtime_error("format_shortest: conversion failed");
  return std::string(buf, res.ptr);
}

bool same_grid_point(double a, double b) noexcept { return std::abs(a - b) <= 1e-9; }

}  // namespace tcscore
