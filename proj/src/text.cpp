#include "argex/text.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <system_error>

namespace argex {

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double out = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw std::runtime_error("not a valid number: '" + std::string(text) + "'");
    }
    return out;
}

std::string to_lower_ascii(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

} // namespace argex
