#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>

namespace sfcbackup {

// Dense 0-based index tagged by the entity it refers to, so a server index
// cannot be passed where a VNF index is expected.
template <typename Tag>
struct Id {
  std::size_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::size_t v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;

  friend std::ostream& operator<<(std::ostream& os, Id id) {
    return os << id.value;
  }
};

using ServerId = Id<struct ServerTag>;
using VnfId = Id<struct VnfTag>;
using SfcId = Id<struct SfcTag>;
using UserId = Id<struct UserTag>;

}  // namespace sfcbackup

template <typename Tag>
struct std::hash<sfcbackup::Id<Tag>> {
  std::size_t operator()(sfcbackup::Id<Tag> id) const noexcept {
    return std::hash<std::size_t>{}(id.value);
  }
};
