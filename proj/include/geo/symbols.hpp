#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace geo {

using PointId = std::uint8_t;

/// Interning table for point names. Canonical proposition ordering compares
/// point ids, so ids must be assigned in lexicographic name order; build the
/// table with all names up front (see make_ranked).
class Symbols {
  public:
    static Symbols make_ranked(std::vector<std::string> names);

    PointId id(const std::string& name) const { return by_name_.at(name); }
    const std::string& name(PointId id) const { return names_[id]; }
    bool contains(const std::string& name) const { return by_name_.count(name) != 0; }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

  private:
    std::vector<std::string> names_;
    std::map<std::string, PointId> by_name_;
};

}  // namespace geo
