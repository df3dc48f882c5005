#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "osm/osm.hpp"

namespace support {

namespace fs = std::filesystem;

inline fs::path corpus() { return fs::path(OSM_CORPUS_DIR); }
inline fs::path ehr() { return corpus() / "ehr"; }

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline osm::Program ehr_program() { return osm::load_program({ehr()}); }

inline const std::string kRequest = "HealthService.requestHistory";

/// Fresh directory holding a copy of the EHR sources minus `drop`.
class CorpusCopy {
public:
    explicit CorpusCopy(const std::vector<std::string>& drop = {}) {
        static int counter = 0;
        std::random_device rd;
        dir_ = fs::temp_directory_path() /
               ("osm-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        fs::create_directories(dir_);
        for (const auto& e : fs::directory_iterator(ehr())) {
            const auto name = e.path().filename().string();
            if (std::find(drop.begin(), drop.end(), name) == drop.end()) fs::copy_file(e.path(), dir_ / name);
        }
    }
    ~CorpusCopy() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    CorpusCopy(const CorpusCopy&) = delete;
    CorpusCopy& operator=(const CorpusCopy&) = delete;

    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
};

/// Action labels of the states along `path`, skipping silent states.
inline std::vector<std::string> actions_along(const osm::KripkeStructure& m, const std::vector<std::size_t>& path) {
    std::vector<std::string> out;
    for (const auto s : path)
        if (const auto a = osm::action_of(m.labels(s))) out.push_back(*a);
    return out;
}

} // namespace support
