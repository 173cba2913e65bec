#ifndef OM_CACHE_HPP
#define OM_CACHE_HPP

/*
 * Append-only polynomial cache shared by the two table engines.
 *
 * One file per engine under the cache directory:
 *
 *     omcache 1
 *     entry <key bytes> <payload bytes> <fnv1a64 of key NUL payload>
 *     <key>
 *     <payload>
 *
 * Entries are only ever appended; rereading keeps the last occurrence of a
 * key.  A checksum mismatch drops that entry (counted), and a framing error
 * drops the unreadable remainder of the file — in both cases callers simply
 * recompute and re-append, so a corrupt file heals on the next run.
 */

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace om::cache {

std::uint64_t fnv1a64(std::string_view s);

struct Stats {
    long long hits = 0;
    long long misses = 0;
    long long corrupt_entries = 0;
};

class Cache {
  public:
    /* Empty directory disables the cache (every get misses, puts are
     * dropped); otherwise the directory is created on first write. */
    explicit Cache(std::string dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }
    std::optional<std::string> get(const std::string& engine, const std::string& key);
    void put(const std::string& engine, const std::string& key, const std::string& payload);
    Stats stats() const;

  private:
    void load_locked(const std::string& engine);
    std::string path(const std::string& engine) const;

    std::string dir_;
    mutable std::mutex mu_;
    Stats stats_;
    std::set<std::string> loaded_;
    std::map<std::string, std::map<std::string, std::string>> entries_;
};

}  // namespace om::cache

#endif  // OM_CACHE_HPP
