#pragma once

#include <optional>
#include <string>

#include "steklov/conformal.hpp"

namespace steklov {

// Test shapes with exact coefficient lists.
ConformalShape preset_disk();          // f(w) = w
ConformalShape preset_two_fold();      // f(w) = w + 0.05 w^3
ConformalShape preset_two_fold_fat();  // f(w) = w + 0.5 w^3
ConformalShape preset_five_fold();     // f(w) = 8 + 5 w + 0.5 w^6

struct CassiniShape {
    ConformalShape shape;
    double tail_magnitude; // largest dropped |a_k| beyond the truncation
};

// Cassini oval map f(w) = alpha w (2 / (1 + alpha^2 - (1 - alpha^2) w^2))^{1/2}.
// The expansion has infinitely many terms; coefficients are materialized by
// sampling f on a dense grid and transforming, truncated at `truncation`.
CassiniShape preset_cassini(double alpha, int truncation);

// Parse "disk", "two-fold", "two-fold-fat", "five-fold", "cassini",
// or "cassini(alpha)". Cassini uses the given truncation.
std::optional<ConformalShape> preset_by_name(const std::string& name,
                                             int cassini_truncation = 128);

} // namespace steklov
