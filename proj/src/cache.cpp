#include "om/cache.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace om::cache {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

static std::uint64_t entry_checksum(const std::string& key, const std::string& payload) {
    std::string buf = key;
    buf.push_back('\0');
    buf += payload;
    return fnv1a64(buf);
}

std::string Cache::path(const std::string& engine) const {
    return (std::filesystem::path(dir_) / (engine + ".omcache")).string();
}

void Cache::load_locked(const std::string& engine) {
    if (!loaded_.insert(engine).second) return;
    auto& table = entries_[engine];
    std::ifstream in(path(engine), std::ios::binary);
    if (!in) return;
    std::string line;
    if (!std::getline(in, line) || line != "omcache 1") {
        if (!line.empty()) ++stats_.corrupt_entries;
        return;
    }
    while (std::getline(in, line)) {
        std::istringstream hdr(line);
        std::string tag;
        std::size_t key_len = 0, payload_len = 0;
        std::uint64_t sum = 0;
        if (!(hdr >> tag >> key_len >> payload_len >> sum) || tag != "entry") {
            ++stats_.corrupt_entries;
            return;  // framing lost; the remainder is unreadable
        }
        std::string key(key_len, '\0'), payload(payload_len, '\0');
        in.read(key.data(), static_cast<std::streamsize>(key_len));
        char nl1 = 0;
        in.get(nl1);
        in.read(payload.data(), static_cast<std::streamsize>(payload_len));
        char nl2 = 0;
        in.get(nl2);
        if (!in || nl1 != '\n' || nl2 != '\n') {
            ++stats_.corrupt_entries;
            return;
        }
        if (entry_checksum(key, payload) != sum) {
            ++stats_.corrupt_entries;
            continue;  // framing intact: skip just this entry
        }
        table[key] = std::move(payload);  // last entry wins
    }
}

std::optional<std::string> Cache::get(const std::string& engine, const std::string& key) {
    if (!enabled()) return std::nullopt;
    std::lock_guard lock(mu_);
    load_locked(engine);
    const auto& table = entries_[engine];
    auto it = table.find(key);
    if (it == table.end()) {
        ++stats_.misses;
        return std::nullopt;
    }
    ++stats_.hits;
    return it->second;
}

void Cache::put(const std::string& engine, const std::string& key,
                const std::string& payload) {
    if (!enabled()) return;
    std::lock_guard lock(mu_);
    load_locked(engine);
    auto& table = entries_[engine];
    auto it = table.find(key);
    if (it != table.end() && it->second == payload) return;  // already persisted
    table[key] = payload;

    std::filesystem::create_directories(dir_);
    const std::string p = path(engine);
    const bool fresh = !std::filesystem::exists(p) || std::filesystem::file_size(p) == 0;
    std::ofstream out(p, std::ios::binary | std::ios::app);
    if (!out) return;  // caching is best-effort; computation already succeeded
    if (fresh) out << "omcache 1\n";
    out << "entry " << key.size() << ' ' << payload.size() << ' '
        << entry_checksum(key, payload) << '\n'
        << key << '\n'
        << payload << '\n';
}

Stats Cache::stats() const {
    std::lock_guard lock(mu_);
    return stats_;
}

}  // namespace om::cache
