#pragma once

#include <filesystem>
#include <string>

#include "chped/io.hpp"
#include "chped/system.hpp"

namespace test {

inline std::filesystem::path data_dir() { return CHPED_DATA_DIR; }

inline const chped::SystemDefinition& bundled(int n) {
    static const chped::SystemDefinition s1 = chped::load_system(data_dir() / "system1.json");
    static const chped::SystemDefinition s2 = chped::load_system(data_dir() / "system2.json");
    static const chped::SystemDefinition s3 = chped::load_system(data_dir() / "system3.json");
    return n == 1 ? s1 : n == 2 ? s2 : s3;
}

inline chped::DispatchVector dispatch(const chped::SystemDefinition& sys, std::initializer_list<double> p,
                                      std::initializer_list<double> o, std::initializer_list<double> h,
                                      std::initializer_list<double> t) {
    chped::DispatchVector x = chped::DispatchVector::zeros(sys);
    auto fill = [](Eigen::VectorXd& v, std::initializer_list<double> vals) {
        Eigen::Index i = 0;
        for (double d : vals) v[i++] = d;
    };
    fill(x.p, p);
    fill(x.o, o);
    fill(x.h, h);
    fill(x.t, t);
    return x;
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("chped_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace test
