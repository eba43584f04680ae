#include "chsh/density_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chsh {

namespace {

DensityModel from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument("density spec: missing string field \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "builtin") {
        if (!j.contains("name") || !j["name"].is_string())
            throw std::invalid_argument("density spec: builtin requires a \"name\"");
        return DensityModel::builtin(j["name"].get<std::string>());
    }
    if (kind == "table") {
        if (!j.contains("delta") || !j.contains("rho") || !j["delta"].is_array() ||
            !j["rho"].is_array())
            throw std::invalid_argument("density spec: table requires \"delta\" and \"rho\" arrays");
        auto delta = j["delta"].get<std::vector<double>>();
        auto rho = j["rho"].get<std::vector<double>>();
        std::string name = j.value("name", std::string("table"));
        return DensityModel::tabulated(std::move(delta), std::move(rho), std::move(name));
    }
    throw std::invalid_argument("density spec: unknown kind \"" + kind + "\"");
}

}  // namespace

DensityModel density_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw std::invalid_argument("density spec: invalid JSON");
    return from_json(j);
}

DensityModel density_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open density spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return density_from_json_text(buf.str());
}

std::string density_to_json_text(const DensityModel& model) {
    nlohmann::ordered_json j;
    if (model.is_builtin()) {
        j["kind"] = "builtin";
        j["name"] = model.name();
    } else {
        j["kind"] = "table";
        j["name"] = model.name();
        j["delta"] = std::vector<double>(model.grid().begin(), model.grid().end());
        j["rho"] = std::vector<double>(model.values().begin(), model.values().end());
    }
    return j.dump();
}

DensityModel density_from_spec(const std::string& spec) {
    if (spec == "uniform" || spec == "quantum") return DensityModel::builtin(spec);
    return density_from_json_file(spec);
}

}  // namespace chsh
