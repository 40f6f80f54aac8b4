#ifndef NAMESIFT_ERROR_HPP
#define NAMESIFT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace namesift {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs: invalid configuration, malformed corpus, unusable data.
struct data_error : error {
    using error::error;
};

// Filesystem and stream failures.
struct io_error : error {
    using error::error;
};

// Corrupt or unparseable model file (including checksum mismatch).
struct format_error : data_error {
    using data_error::data_error;
};

// Model file written by a newer format revision.
struct version_error : data_error {
    using data_error::data_error;
};

}  // namespace namesift

#endif
