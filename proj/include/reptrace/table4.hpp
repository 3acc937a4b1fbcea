#pragma once
// Built-in running example: assessor A rates providers B, C, D and E on
// quality, timeliness and cost from interaction and witness trust values.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "reptrace/explain.hpp"
#include "reptrace/io.hpp"

namespace reptrace::table4 {

inline constexpr std::string_view kAssessor = "A";
inline constexpr std::string_view kWitness = "X";  // source of the fixture's witness ratings

struct Row {
    std::string provider;
    std::array<double, 3> interaction;  // quality, timeliness, cost
    std::array<double, 3> witness;
    std::array<double, 3> term_trust;   // exact
    double overall;                     // exact
    std::array<double, 3> printed_term_trust;  // as published, 2 decimals
    double printed_overall;
};

const std::vector<Row>& rows();
const Row& row(std::string_view provider);
const std::vector<Term>& terms();

/// Term weights 0.45 / 0.35 / 0.20, component weights I 0.75 / W 0.25.
Preferences preferences();

/// Component trusts injected directly, bypassing rating aggregation.
Assessment assessment(std::string_view provider);

/// FIRE comparison context whose uniform baselines equal the assessments.
explain::ComparisonContext context(std::string_view preferred, std::string_view other);

/// The same trust values expressed as one interaction and one witness rating
/// per provider and term, all recorded at round 0.
io::StoresDocument stores();

/// Round half up to 2 decimals, tolerant of binary representation error at
/// exact halves (0.175 becomes 0.18).
double round2(double v);

inline constexpr std::string_view kExample1Text =
    "B has a better reputation than C, because it is better in all aspects that you consider in "
    "your preferences, mainly with respect to timeliness, and quality.";
inline constexpr std::string_view kExample2Text = "B has a better reputation than D, mainly due to quality.";
inline constexpr std::string_view kExample3Text =
    "Considering timeliness, even though E has a higher trust value considering witness "
    "reputation, which is less important, B has a higher trust value considering own interaction, "
    "which is more important.";

}  // namespace reptrace::table4
