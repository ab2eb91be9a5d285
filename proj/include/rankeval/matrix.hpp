#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankeval {

/// Malformed user input (files, shapes, flag values). The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of sample embeddings, one row per sample.
struct EmbeddingMatrix {
    std::size_t rows = 0;
    std::size_t dim = 0;
    std::vector<double> values;

    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::size_t r, std::size_t d)
        : rows(r), dim(d), values(r * d, 0.0) {}

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * dim, dim};
    }
    double& at(std::size_t r, std::size_t c) { return values[r * dim + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * dim + c]; }

    static EmbeddingMatrix zeros(std::size_t rows, std::size_t dim) {
        return EmbeddingMatrix(rows, dim);
    }

    /// Throws InputError on empty shape, size mismatch, or non-finite values.
    void validate() const {
        if (rows == 0 || dim == 0)
            throw InputError("embedding matrix must have rows >= 1 and dim >= 1");
        if (values.size() != rows * dim)
            throw InputError("embedding matrix storage does not match rows*dim");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i]))
                throw InputError("non-finite embedding value at row " +
                                 std::to_string(i / dim) + ", column " +
                                 std::to_string(i % dim));
        }
    }
};

/// Query-by-database matrix of distances.
struct DistanceMatrix {
    std::size_t q_rows = 0;
    std::size_t k_cols = 0;
    std::vector<double> values;

    DistanceMatrix() = default;
    DistanceMatrix(std::size_t q, std::size_t k)
        : q_rows(q), k_cols(k), values(q * k, 0.0) {}

    std::span<const double> row(std::size_t q) const {
        return {values.data() + q * k_cols, k_cols};
    }
    double& at(std::size_t q, std::size_t k) { return values[q * k_cols + k]; }
    double at(std::size_t q, std::size_t k) const { return values[q * k_cols + k]; }
};

} // namespace rankeval
