#pragma once

#include <cstdint>

namespace slr {

/// Element and event counts for data movement between the host grid and
/// worker-local buffers during one loop run.
///
/// `full_fill_elems` counts owned elements loaded at start (the grid size);
/// halo rows shipped alongside that initial load are kept apart in
/// `fill_halo_elems`. `halo_elems`/`halo_events` count the per-iteration
/// border alignment between partitions.
struct CopyLedger {
  std::uint64_t full_fill_elems = 0;
  std::uint64_t fill_halo_elems = 0;
  std::uint64_t readback_elems = 0;
  std::uint64_t halo_elems = 0;
  std::uint64_t fill_events = 0;
  std::uint64_t readback_events = 0;
  std::uint64_t halo_events = 0;

  void reset() noexcept { *this = CopyLedger{}; }

  friend bool operator==(const CopyLedger&, const CopyLedger&) = default;
};

}  // namespace slr
