#include "wdt/format.hpp"

#include <charconv>
#include <system_error>

#include "wdt/errors.hpp"

namespace wdt {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw IoFailure("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw IoFailure("parse_double: bad float '" + s + "'");
    return v;
}

}  // namespace wdt
