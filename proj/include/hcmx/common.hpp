#ifndef HCMX_COMMON_HPP
#define HCMX_COMMON_HPP
//
// Project     : hcmx
// Module      : common
// Description : shared error types and small helpers
//

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hcmx {

// thrown when a compressed payload is truncated or malformed
struct corrupt_buffer_error : std::runtime_error {
    explicit corrupt_buffer_error(const std::string& what) : std::runtime_error(what) {}
};

// thrown when a triangular factor has a zero or near-zero pivot
struct singular_matrix_error : std::runtime_error {
    explicit singular_matrix_error(const std::string& what) : std::runtime_error(what) {}
};

using index_t = std::size_t;

} // namespace hcmx

#endif // HCMX_COMMON_HPP
