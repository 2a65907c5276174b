#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "cedrf/spectral.hpp"

namespace cedrf::app {

/// JSON model document: {"A": [[...], ...], "sigma2": s, "sigma_x": [[...], ...]}.
/// `sigma_x` is optional and triggers whitening.
struct ModelFile {
    Matrix A;
    double sigma2 = 1.0;
    std::optional<Matrix> sigma_x;

    /// The model the formulas run on (whitened when sigma_x is present).
    [[nodiscard]] ObservationModel observation_model() const;
};

/// Throws ParseError (with line/column or field name) or InvalidModel.
ModelFile parse_model(std::string_view text, const std::string& source = "<input>");

/// Throws FileNotFound, then as parse_model.
ModelFile load_model(const std::filesystem::path& path);

}  // namespace cedrf::app
