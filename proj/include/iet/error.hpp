#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace iet {

// Every failure mode the library can report. Budget exhaustion during
// chain/return searches is *not* here: it is an inconclusive value, not an
// error (see Budgeted<T> in first_return.hpp).
enum class errc {
    missing_unit,
    duplicate_radicand,
    nonpositive_radicand,
    perfect_square_radicand,
    nonsquarefree_radicand,
    radicand_too_large,
    basis_mismatch,
    precision_exhausted,
    not_a_bijection,
    nonpositive_length,
    length_sum_mismatch,
    out_of_domain,
    domain_mismatch,
    irrational_rescale,
    periodic_seed,
    bad_interval,
    height_mismatch,
    levels_do_not_tile,
    not_candidate,
    not_minimal,
    equal_heights,
    not_a_rotation_base,
    not_minimal_base,
    verification_failed,
    dependent_parameters,
    no_minimality_evidence,
    unsupported_dimension,
    invalid_document,
    invalid_argument,
    cancelled,
};

inline std::string_view code_name(errc c) {
    switch (c) {
        case errc::missing_unit: return "missing_unit";
        case errc::duplicate_radicand: return "duplicate_radicand";
        case errc::nonpositive_radicand: return "nonpositive_radicand";
        case errc::perfect_square_radicand: return "perfect_square_radicand";
        case errc::nonsquarefree_radicand: return "nonsquarefree_radicand";
        case errc::radicand_too_large: return "radicand_too_large";
        case errc::basis_mismatch: return "basis_mismatch";
        case errc::precision_exhausted: return "precision_exhausted";
        case errc::not_a_bijection: return "not_a_bijection";
        case errc::nonpositive_length: return "nonpositive_length";
        case errc::length_sum_mismatch: return "length_sum_mismatch";
        case errc::out_of_domain: return "out_of_domain";
        case errc::domain_mismatch: return "domain_mismatch";
        case errc::irrational_rescale: return "irrational_rescale";
        case errc::periodic_seed: return "periodic_seed";
        case errc::bad_interval: return "bad_interval";
        case errc::height_mismatch: return "height_mismatch";
        case errc::levels_do_not_tile: return "levels_do_not_tile";
        case errc::not_candidate: return "not_candidate";
        case errc::not_minimal: return "not_minimal";
        case errc::equal_heights: return "equal_heights";
        case errc::not_a_rotation_base: return "not_a_rotation_base";
        case errc::not_minimal_base: return "not_minimal_base";
        case errc::verification_failed: return "verification_failed";
        case errc::dependent_parameters: return "dependent_parameters";
        case errc::no_minimality_evidence: return "no_minimality_evidence";
        case errc::unsupported_dimension: return "unsupported_dimension";
        case errc::invalid_document: return "invalid_document";
        case errc::invalid_argument: return "invalid_argument";
        case errc::cancelled: return "cancelled";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    error(errc code, std::string message, std::string json_pointer)
        : std::runtime_error(std::move(message)),
          code_(code),
          pointer_(std::move(json_pointer)) {}

    errc code() const noexcept { return code_; }
    const std::optional<std::string>& json_pointer() const noexcept { return pointer_; }

private:
    errc code_;
    std::optional<std::string> pointer_;  // set when a document field is at fault
};

[[noreturn]] inline void fail(errc code, std::string message) {
    throw error(code, std::move(message));
}

[[noreturn]] inline void fail(errc code, std::string message, std::string json_pointer) {
    throw error(code, std::move(message), std::move(json_pointer));
}

} // namespace iet
