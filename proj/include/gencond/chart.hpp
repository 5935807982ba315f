#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gencond/expr.hpp"

namespace gencond {
namespace expr {

/// A coordinate chart with metric component formulas: dimension, ordered
/// coordinate names, the lower triangle of g[i][j], optional region
/// inequalities (valid where each formula is > 0) and an optional sampling
/// box. See docs/chart_format.md for the file grammar.
class Chart {
public:
    Chart(std::string name, std::vector<std::string> coordinates);

    const std::string& name() const { return name_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coordinates() const { return coords_; }

    /// Install the formula for component (i, j), j <= i.
    void set_component(int i, int j, const std::string& formula_text,
                       int line_offset = 0, int column_offset = 0);
    void add_region(const std::string& formula_text, int line_offset = 0, int column_offset = 0);
    void set_sample_box(std::vector<std::pair<double, double>> box);

    bool has_component(int i, int j) const;
    /// Formula source for component (i, j); "0" when unset.
    const std::string& component_source(int i, int j) const;

    /// Metric value g_ij(p); components without a formula evaluate to 0.
    double component_value(int i, int j, const std::vector<double>& p) const;
    /// Full symmetric matrix value, row-major n*n.
    std::vector<double> metric_value(const std::vector<double>& p) const;

    TaylorJet component_jet(int i, int j, const std::vector<double>& p, int order) const;

    bool in_region(const std::vector<double>& p) const;
    /// Throws RegionError when p violates a region inequality.
    void require_in_region(const std::vector<double>& p) const;
    int region_count() const { return static_cast<int>(regions_.size()); }

    /// Per-axis sampling interval; defaults to [-1, 1] on every axis.
    const std::vector<std::pair<double, double>>& sample_box() const { return box_; }

    /// Canonical chart-file text for this chart (parses back to an
    /// equivalent chart).
    std::string to_text() const;

private:
    int tri_index(int i, int j) const;

    std::string name_;
    std::vector<std::string> coords_;
    std::vector<std::optional<Expression>> lower_;  // index j <= i
    std::vector<std::string> lower_source_;
    std::vector<Expression> regions_;
    std::vector<std::string> region_source_;
    std::vector<std::pair<double, double>> box_;
};

/// Parse the chart file grammar. Errors carry 1-based line and column.
Chart parse_chart_text(const std::string& text, const std::string& default_name = "chart");
Chart load_chart_file(const std::string& path);

}  // namespace expr
}  // namespace gencond
