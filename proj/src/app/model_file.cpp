#include "cedrf/app/model_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cedrf/error.hpp"

namespace cedrf::app {

namespace {

using nlohmann::json;

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Matrix parse_matrix(const json& node, const std::string& field, const std::string& source) {
    if (!node.is_array() || node.empty()) {
        throw ParseError(source + ": field '" + field + "' must be a non-empty array of rows");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const json& row = node[i];
        if (!row.is_array() || row.empty()) {
            throw ParseError(source + ": field '" + field + "' row " + std::to_string(i) +
                             " must be a non-empty array of numbers");
        }
        std::vector<double> values;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!row[j].is_number()) {
                throw ParseError(source + ": field '" + field + "' entry [" + std::to_string(i) + "][" +
                                 std::to_string(j) + "] is not a number");
            }
            values.push_back(row[j].get<double>());
        }
        if (!rows.empty() && values.size() != rows.front().size()) {
            throw InvalidModel(source + ": field '" + field + "' is not rectangular (row " + std::to_string(i) +
                               " has " + std::to_string(values.size()) + " entries, expected " +
                               std::to_string(rows.front().size()) + ")");
        }
        rows.push_back(std::move(values));
    }
    try {
        return Matrix::from_rows(rows);
    } catch (const InvalidMatrix& e) {
        throw InvalidModel(source + ": field '" + field + "': " + e.what());
    }
}

}  // namespace

ObservationModel ModelFile::observation_model() const {
    if (sigma_x) return whiten(*sigma_x, A, sigma2);
    return {A, sigma2};
}

ModelFile parse_model(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": malformed JSON at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!doc.is_object()) throw ParseError(source + ": top-level value must be an object");

    ModelFile out;
    if (!doc.contains("A")) throw ParseError(source + ": missing field 'A'");
    out.A = parse_matrix(doc["A"], "A", source);

    if (!doc.contains("sigma2")) throw ParseError(source + ": missing field 'sigma2'");
    if (!doc["sigma2"].is_number()) throw ParseError(source + ": field 'sigma2' must be a number");
    out.sigma2 = doc["sigma2"].get<double>();
    if (!(std::isfinite(out.sigma2) && out.sigma2 > 0.0)) {
        throw InvalidModel(source + ": field 'sigma2' must be positive");
    }

    if (doc.contains("sigma_x") && !doc["sigma_x"].is_null()) {
        Matrix sx = parse_matrix(doc["sigma_x"], "sigma_x", source);
        if (sx.rows() != out.A.cols() || sx.cols() != out.A.cols()) {
            throw InvalidModel(source + ": field 'sigma_x' must be " + std::to_string(out.A.cols()) + "x" +
                               std::to_string(out.A.cols()));
        }
        if (linalg::max_asymmetry(sx) > linalg::kSymmetryTolerance) {
            throw InvalidModel(source + ": field 'sigma_x' is not symmetric");
        }
        try {
            (void)sym_sqrt_pd(sx);
        } catch (const NotPositiveDefinite&) {
            throw InvalidModel(source + ": field 'sigma_x' is not positive definite");
        }
        out.sigma_x = std::move(sx);
    }
    return out;
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open model file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), path.string());
}

}  // namespace cedrf::app
