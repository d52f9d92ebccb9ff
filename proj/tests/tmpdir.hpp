#pragma once
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("sfou_" + tag + "_" + std::to_string(std::hash<std::string>{}(tag + std::to_string(reinterpret_cast<std::uintptr_t>(this)))));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

inline std::string slurp(const std::string& file) {
    std::ifstream f(file, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}
