#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace testing_support
{

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir
{
public:
    TempDir()
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("mdattack_test_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::vector<char> read_bytes(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

inline void write_bytes(const std::filesystem::path& p, const std::vector<char>& bytes)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

/// True when both directories hold the same file names with identical bytes.
inline bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b)
{
    std::vector<std::string> na, nb;
    for (const auto& e : std::filesystem::directory_iterator(a))
        na.push_back(e.path().filename().string());
    for (const auto& e : std::filesystem::directory_iterator(b))
        nb.push_back(e.path().filename().string());
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    if (na != nb)
        return false;
    for (const auto& n : na)
        if (read_bytes(a / n) != read_bytes(b / n))
            return false;
    return true;
}

} // namespace testing_support
