#include "steenrod/equivariant.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <system_error>

namespace steenrod::eq {

namespace fs = std::filesystem;

std::string default_cache_dir()
{
    const char* env = std::getenv("STEENROD_CACHE_DIR");
    return env ? std::string(env) : std::string();
}

fs::path diagonal_cache_file(const fs::path& dir, int p, int bound)
{
    return dir / ("diagonal-p" + std::to_string(p) + "-n" + std::to_string(bound) + "-v1.txt");
}

namespace {

std::shared_ptr<const EquivariantDiagonal> load_or_build(int p, int bound, const std::string& dir)
{
    if (!dir.empty()) {
        fs::path file = diagonal_cache_file(dir, p, bound);
        std::ifstream in(file);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                auto d = EquivariantDiagonal::parse(ss.str());
                if (d.p() == p && d.bound() == bound)
                    return std::make_shared<const EquivariantDiagonal>(std::move(d));
            } catch (const std::exception&) {
                // Unreadable cache files are rebuilt and overwritten.
            }
        }
    }
    auto d = std::make_shared<const EquivariantDiagonal>(equivariant_diagonal(p, bound));
    if (!dir.empty()) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        fs::path file = diagonal_cache_file(dir, p, bound);
        fs::path tmp = file;
        tmp += ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(d.get()));
        {
            std::ofstream out(tmp, std::ios::binary);
            out << d->serialize();
        }
        fs::rename(tmp, file, ec);
        if (ec)
            fs::remove(tmp, ec);
    }
    return d;
}

}  // namespace

std::shared_ptr<const EquivariantDiagonal> cached_diagonal(int p, int bound, const std::string& cache_dir)
{
    using Key = std::tuple<int, int, std::string>;
    static std::mutex mutex;
    static std::map<Key, std::shared_future<std::shared_ptr<const EquivariantDiagonal>>> tables;

    const std::string dir = cache_dir.empty() ? default_cache_dir() : cache_dir;
    Key key{p, bound, dir};
    std::promise<std::shared_ptr<const EquivariantDiagonal>> promise;
    std::shared_future<std::shared_ptr<const EquivariantDiagonal>> future;
    bool owner = false;
    {
        std::lock_guard lock(mutex);
        auto it = tables.find(key);
        if (it == tables.end()) {
            future = promise.get_future().share();
            tables.emplace(key, future);
            owner = true;
        } else {
            future = it->second;
        }
    }
    if (owner) {
        try {
            promise.set_value(load_or_build(p, bound, dir));
        } catch (...) {
            {
                std::lock_guard lock(mutex);
                tables.erase(key);
            }
            promise.set_exception(std::current_exception());
        }
    }
    return future.get();
}

}  // namespace steenrod::eq
