#include <json.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("ericksen_cli_" + name);
    fs::remove_all(d);
    return d;
}

int run(const std::string& args)
{
    const std::string cmd = std::string(ERICKSEN_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json manifest(const fs::path& dir)
{
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.size() > 14 && name.substr(name.size() - 14) == "-manifest.json") {
            std::ifstream is(e.path());
            return nlohmann::json::parse(is);
        }
    }
    return nullptr;
}

} // namespace

TEST(Cli, DoublePoints)
{
    const auto d = fresh_dir("dp");
    ASSERT_EQ(run("double-points --kmax 3 --out " + d.string()), 0);
    const auto m = manifest(d);
    ASSERT_FALSE(m.is_null());
    EXPECT_EQ(m["command"], "double-points");
    EXPECT_FALSE(m["partial"].get<bool>());
    for (const auto& f : m["outputs"]) EXPECT_TRUE(fs::exists(d / f.get<std::string>())) << f;
}

TEST(Cli, SameConfigSamePrefix)
{
    const auto d = fresh_dir("ls");
    ASSERT_EQ(run("ls --k 2 --out " + d.string()), 0);
    ASSERT_EQ(run("ls --k 2 --out " + d.string()), 0);
    int manifests = 0;
    for (const auto& e : fs::directory_iterator(d))
        if (e.path().filename().string().find("manifest") != std::string::npos) ++manifests;
    EXPECT_EQ(manifests, 1);
    EXPECT_EQ(run("ls --k 3 --out " + d.string()), 0);
    manifests = 0;
    for (const auto& e : fs::directory_iterator(d))
        if (e.path().filename().string().find("manifest") != std::string::npos) ++manifests;
    EXPECT_EQ(manifests, 2);
}

TEST(Cli, EigencurvesAndLoop)
{
    const auto d = fresh_dir("ec");
    EXPECT_EQ(run("eigencurves --alpha 0:20 --kmax 2 --out " + d.string()), 0);
    const auto m = manifest(d);
    ASSERT_FALSE(m.is_null());
    EXPECT_FALSE(m["warnings"].empty());
    const auto l = fresh_dir("loop");
    EXPECT_EQ(run("loop --no-pde --out " + l.string()), 0);
    EXPECT_FALSE(manifest(l).is_null());
}

TEST(Cli, UsageErrors)
{
    const auto d = fresh_dir("bad");
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("eigencurves --alpha 5 --out " + d.string()), 2);
    EXPECT_EQ(run("diagram --alpha -1 --out " + d.string()), 2);
    EXPECT_EQ(run("ls --k 0 --out " + d.string()), 2);
}
