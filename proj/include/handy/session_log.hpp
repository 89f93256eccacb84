// Bounded request log with gap-based session splitting, plus text IO for
// session datasets.
#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "handy/types.hpp"

namespace handy {

// Fixed-capacity request history. When full, the oldest request is dropped.
// Requests must arrive in nondecreasing time order. Each request belongs to
// a stream (one per consumer); a gap of at least `session_gap` seconds
// between consecutive requests of the same stream starts a new session, so
// interleaved consumers never fuse into one session.
class LogDatabase {
  public:
    explicit LogDatabase(size_t capacity = 64, double session_gap = 30.0);

    void logRequest(ServiceId service, double time, uint64_t stream = 0);

    // Sessions ordered by first request, duplicates preserved.
    std::vector<std::vector<ServiceId>> sessions() const;

    // Bumped on every logged request; lets callers re-mine lazily.
    uint64_t revision() const { return revision_; }

    // Most recently logged service, or kNoService when empty.
    static constexpr ServiceId kNoService = 0xffffffffu;
    ServiceId lastService() const {
        return entries_.empty() ? kNoService : entries_.back().service;
    }

    size_t size() const { return entries_.size(); }
    size_t capacity() const { return capacity_; }
    double sessionGap() const { return session_gap_; }

  private:
    struct Entry {
        ServiceId service;
        double time;
        uint64_t stream;
    };

    size_t capacity_;
    double session_gap_;
    std::deque<Entry> entries_;
    uint64_t revision_ = 0;
};

// One session per line, service ids space separated, '#' starts a comment.
std::vector<std::vector<ServiceId>> loadSessionFile(const std::string& path);
void saveSessionFile(const std::string& path,
                     const std::vector<std::vector<ServiceId>>& sessions);

}  // namespace handy
