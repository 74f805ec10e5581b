#include "spikelet/bank_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spikelet/errors.hpp"
#include "spikelet/frames.hpp"

namespace spikelet {

namespace {

using nlohmann::json;

double requirePositive(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(errcode::kConfig, std::string("config: missing ") + key);
    if (!j[key].is_number())
        throw Error(errcode::kConfig, std::string("config: ") + key + " must be a number");
    const double v = j[key].get<double>();
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(errcode::kConfig, std::string("config: ") + key + " must be positive");
    return v;
}

std::string requireString(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(errcode::kConfig, std::string("config: missing ") + key);
    if (!j[key].is_string())
        throw Error(errcode::kConfig, std::string("config: ") + key + " must be a string");
    return j[key].get<std::string>();
}

} // namespace

BankConfig loadBankConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errcode::kIo, "config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(errcode::kFormat, std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(errcode::kFormat, "config: document must be an object");
    if (!j.contains("version") || !j["version"].is_number_integer() ||
        j["version"].get<int>() != 1)
        throw Error(errcode::kFormat, "config: unsupported schema version (expected 1)");

    static const std::set<std::string> known = {
        "version",     "family", "c",     "frequencyRange", "K",     "cascadeOrder",
        "theta",       "sampleRateHz",    "reset", "decodeMode",     "doeMu"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (known.find(it.key()) == known.end())
            throw Error(errcode::kConfig, "config: unknown key '" + it.key() + "'");

    BankConfig cfg;
    const std::string fam = requireString(j, "family");
    if (fam == "dog") cfg.family = WaveletFamily::DoG;
    else if (fam == "doe") cfg.family = WaveletFamily::DoE;
    else if (fam == "dot") cfg.family = WaveletFamily::DoT;
    else throw Error(errcode::kConfig, "config: family must be one of dog|doe|dot");

    if (!j.contains("K")) throw Error(errcode::kConfig, "config: missing K");
    if (!j["K"].is_number_integer() || j["K"].get<long long>() < 1)
        throw Error(errcode::kConfig, "config: K must be a positive integer");
    cfg.K = static_cast<std::size_t>(j["K"].get<long long>());

    const bool hasC = j.contains("c");
    const bool hasRange = j.contains("frequencyRange");
    if (hasC == hasRange)
        throw Error(errcode::kConfig, "config: give exactly one of c or frequencyRange");
    if (hasC) {
        cfg.c = requirePositive(j, "c");
    } else {
        const json& fr = j["frequencyRange"];
        if (!fr.is_object())
            throw Error(errcode::kConfig, "config: frequencyRange must be an object");
        cfg.minHz = requirePositive(fr, "minHz");
        cfg.maxHz = requirePositive(fr, "maxHz");
        cfg.fromFrequencyRange = true;
        cfg.c = designRatio(cfg.minHz, cfg.maxHz, cfg.K);  // floors enforced here
    }

    if (j.contains("cascadeOrder")) {
        if (!j["cascadeOrder"].is_number_integer() || j["cascadeOrder"].get<long long>() < 1)
            throw Error(errcode::kConfig, "config: cascadeOrder must be a positive integer");
        cfg.cascadeOrder = static_cast<std::size_t>(j["cascadeOrder"].get<long long>());
    }
    if (j.contains("theta")) cfg.theta = requirePositive(j, "theta");
    cfg.sampleRateHz = requirePositive(j, "sampleRateHz");

    if (j.contains("reset")) {
        const std::string r = requireString(j, "reset");
        if (r == "soft") cfg.reset = ResetMode::Soft;
        else if (r == "hard") cfg.reset = ResetMode::Hard;
        else throw Error(errcode::kConfig, "config: reset must be soft|hard");
    }
    if (j.contains("decodeMode")) {
        const std::string m = requireString(j, "decodeMode");
        if (m == "lstsq") cfg.decodeMode = DecodeMode::LeastSquares;
        else if (m == "identity") cfg.decodeMode = DecodeMode::IdentityWeights;
        else throw Error(errcode::kConfig, "config: decodeMode must be lstsq|identity");
    }
    if (j.contains("doeMu")) {
        const std::string m = requireString(j, "doeMu");
        if (m == "direct") cfg.doeMu = DoeMuConvention::Direct;
        else if (m == "limit") cfg.doeMu = DoeMuConvention::LimitDerived;
        else throw Error(errcode::kConfig, "config: doeMu must be direct|limit");
    }

    // floor checks at load: grid construction throws E_FLOOR/E_RANGE on bad c/K
    const double maxHz = cfg.fromFrequencyRange ? cfg.maxHz : cfg.sampleRateHz / 4.0;
    makeScaleGrid(1.0 / (2.0 * M_PI * maxHz), cfg.c, cfg.K);
    return cfg;
}

FilterBankSpec bankFromConfig(const BankConfig& cfg) {
    const double maxHz = cfg.fromFrequencyRange ? cfg.maxHz : cfg.sampleRateHz / 4.0;
    const ScaleGrid grid = makeScaleGrid(1.0 / (2.0 * M_PI * maxHz), cfg.c, cfg.K);
    return makeFilterBank(cfg.family, grid, 1.0 / cfg.sampleRateHz, cfg.cascadeOrder, cfg.theta,
                          cfg.reset, cfg.doeMu);
}

std::string describeBankConfig(const BankConfig& cfg) {
    std::ostringstream os;
    os << "family=";
    switch (cfg.family) {
    case WaveletFamily::DoG: os << "dog"; break;
    case WaveletFamily::DoE: os << "doe"; break;
    case WaveletFamily::DoT: os << "dot"; break;
    }
    os << " c=" << cfg.c << " K=" << cfg.K << " cascadeOrder=" << cfg.cascadeOrder
       << " theta=" << cfg.theta << " sampleRateHz=" << cfg.sampleRateHz
       << " reset=" << (cfg.reset == ResetMode::Soft ? "soft" : "hard")
       << " decodeMode=" << (cfg.decodeMode == DecodeMode::LeastSquares ? "lstsq" : "identity");
    if (cfg.fromFrequencyRange)
        os << " frequencyRange=[" << cfg.minHz << "," << cfg.maxHz << "]Hz";
    return os.str();
}

} // namespace spikelet
