#pragma once

#include <cstdint>

namespace solcheck {

/// Costly-loop standard: a loop whose maximum executed statement count is
/// above `stmt_limit` is costly.
struct GasModel {
    std::uint64_t expensive_tx_gas = 69301;
    std::uint64_t ave_gas_per_stmt = 2928;
    std::uint64_t stmt_limit = 23;
    /// Set when stmt_limit was given directly rather than derived.
    bool overridden = false;

    /// Model with stmt_limit derived from the two gas figures. Throws ZeroAverageGas.
    static GasModel derived(std::uint64_t expensive_tx_gas, std::uint64_t ave_gas_per_stmt);
    /// Default gas figures with a fixed limit.
    static GasModel with_limit(std::uint64_t stmt_limit);

    friend bool operator==(const GasModel&, const GasModel&) = default;
};

/// Largest L with ave_gas_per_stmt * L < expensive_tx_gas. Throws ZeroAverageGas.
std::uint64_t derive_stmt_limit(const GasModel& gm);

}  // namespace solcheck
