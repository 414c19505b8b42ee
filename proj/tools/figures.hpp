#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace susyqm::cli {

struct FigurePreset {
    std::string name;
    std::string description;
    std::string x_label;
    std::string y_label;
};

const std::vector<FigurePreset>& figure_presets();

struct FigureData {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::ordered_json details;  // inputs and error summary for the report
};

/// Computes a preset; `points` overrides the default coupling count when > 0.
FigureData make_figure(std::string_view name, std::size_t points = 0);

/// Whitespace-separated columns preceded by '#' comment lines.
std::string to_dat(const FigureData& fig);

/// A gnuplot script plotting `dat_path`.
std::string to_gnuplot(const FigureData& fig, const std::string& dat_path);

}  // namespace susyqm::cli
