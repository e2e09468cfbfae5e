#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyw/field.hpp"

namespace dyw {

/// Field file format: {"dimension": n, "level": L, "cells": [...]} with cells
/// in row-major order, first coordinate slowest.
inline nlohmann::json field_to_json(const ScalarField& f) {
    nlohmann::json j;
    j["dimension"] = f.dim();
    j["level"] = f.level();
    j["cells"] = f.cells();
    return j;
}

inline ScalarField field_from_json(const nlohmann::json& j) {
    if (!j.contains("dimension") || !j.contains("level") || !j.contains("cells"))
        throw std::invalid_argument("field file: needs dimension, level, cells");
    int dim = j.at("dimension").get<int>();
    int level = j.at("level").get<int>();
    std::vector<double> cells = j.at("cells").get<std::vector<double>>();
    return ScalarField(dim, level, std::move(cells));  // length/sign checks in the ctor
}

inline void save_field(const ScalarField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << field_to_json(f).dump(1) << "\n";
}

inline ScalarField load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    in >> j;
    return field_from_json(j);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace dyw
