#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "synchart/data_table.hpp"

namespace fixtures {

// Genre popularity 2014-2022, genres as rows.
inline constexpr const char* kAnimeCsv =
    "Genre,2014,2015,2016,2017,2018,2019,2020,2021,2022\n"
    "Action,80,85,90,95,100,105,110,115,120\n"
    "Adventure,70,73,76,78,80,81,83,85,86\n"
    "Fantasy,60,62,65,69,74,80,87,95,104\n"
    "Romance,50,48,47,45,43,40,38,35,33\n"
    "Horror,30,32,35,39,44,50,57,65,74\n"
    "Mecha,40,38,35,33,30,28,25,23,20\n";

inline synchart::DataTable anime() { return synchart::DataTable::from_csv(kAnimeCsv); }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag)
{
    static std::mt19937_64 gen{std::random_device{}()};
    auto dir = std::filesystem::temp_directory_path() / ("synchart-" + tag + "-" + std::to_string(gen() % 1000000000));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
