#include "tngp/errors.hpp"

#include <iostream>

namespace tngp {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::domain: return "domain";
        case ErrorCode::size: return "size";
        case ErrorCode::config: return "config";
        case ErrorCode::io: return "io";
        case ErrorCode::parse: return "parse";
        case ErrorCode::numeric: return "numeric";
    }
    return "unknown";
}

void warn(const std::string& message) {
    std::cerr << "warning: " << message << "\n";
}

}  // namespace tngp
