#include "spikelet/spike_file.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <utility>

#include "spikelet/errors.hpp"
#include "spikelet/kernels.hpp"

namespace spikelet {

namespace {

constexpr char kMagic[5] = {'S', 'P', 'K', 'W', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::vector<unsigned char>& buf, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    buf.insert(buf.end(), b, b + sizeof(T));
}

template <typename T>
T get(const std::vector<unsigned char>& buf, std::size_t& off, const std::string& path) {
    if (off + sizeof(T) > buf.size())
        throw Error(errcode::kFormat, path + ": truncated spike file");
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

} // namespace

void writeSpikeFile(const std::string& path, const FilterBankSpec& spec,
                    std::uint64_t sampleCount, const std::vector<SpikeTrain>& trains) {
    const std::size_t K = spec.grid.K;
    if (trains.size() != K + 1)
        throw Error(errcode::kConfig, "spike file: expected " + std::to_string(K + 1) +
                                          " trains, got " + std::to_string(trains.size()));
    if (spec.channelNorms.size() != K)
        throw Error(errcode::kConfig, "spike file: bank has no channel norms");
    std::vector<unsigned char> buf;
    buf.insert(buf.end(), kMagic, kMagic + 5);
    put<std::uint32_t>(buf, kVersion);
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(spec.family));
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(spec.reset));
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(spec.doeMu));
    put<std::uint8_t>(buf, 0);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(K));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(spec.cascadeOrder));
    put<double>(buf, spec.grid.c);
    put<double>(buf, spec.grid.levels[1]);
    put<double>(buf, spec.dt);
    put<double>(buf, spec.theta);
    put<std::uint64_t>(buf, sampleCount);
    for (double n : spec.channelNorms) put<double>(buf, n);
    std::uint64_t eventCount = 0;
    for (const auto& t : trains) eventCount += t.events.size();
    put<std::uint64_t>(buf, eventCount);
    for (std::size_t ch = 0; ch <= K; ++ch) {
        const auto& tr = trains[ch];
        if (tr.channel != ch)
            throw Error(errcode::kConfig, "spike file: train order must follow channel index");
        for (std::size_t i = 1; i < tr.events.size(); ++i)
            if (tr.events[i].timeIndex < tr.events[i - 1].timeIndex)
                throw Error(errcode::kConfig, "spike file: events out of order in channel " +
                                                  std::to_string(ch));
        for (const auto& ev : tr.events) {
            put<std::uint16_t>(buf, static_cast<std::uint16_t>(ch));
            put<std::int8_t>(buf, ev.polarity);
            put<std::uint64_t>(buf, ev.timeIndex);
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errcode::kIo, "cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(errcode::kIo, "write failed on " + path);
}

SpikeFileData readSpikeFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errcode::kIo, "cannot open " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    std::size_t off = 0;
    if (buf.size() < 5 || std::memcmp(buf.data(), kMagic, 5) != 0)
        throw Error(errcode::kFormat, path + ": not a spike file (bad magic)");
    off = 5;
    const auto version = get<std::uint32_t>(buf, off, path);
    if (version != kVersion)
        throw Error(errcode::kFormat,
                    path + ": unsupported spike file version " + std::to_string(version));
    const auto family = get<std::uint8_t>(buf, off, path);
    const auto reset = get<std::uint8_t>(buf, off, path);
    const auto doeMu = get<std::uint8_t>(buf, off, path);
    get<std::uint8_t>(buf, off, path);
    const auto K = get<std::uint32_t>(buf, off, path);
    const auto cascadeOrder = get<std::uint32_t>(buf, off, path);
    const double c = get<double>(buf, off, path);
    const double level1 = get<double>(buf, off, path);
    const double dt = get<double>(buf, off, path);
    const double theta = get<double>(buf, off, path);
    const auto sampleCount = get<std::uint64_t>(buf, off, path);
    if (family > 2 || reset > 1 || doeMu > 1)
        throw Error(errcode::kFormat, path + ": bad enum field in header");
    if (K < 1 || !(c > 1.0) || !(level1 > 0.0) || !(dt > 0.0) || !(theta > 0.0))
        throw Error(errcode::kFormat, path + ": bad header field");
    SpikeFileData data;
    data.spec.family = static_cast<WaveletFamily>(family);
    data.spec.reset = static_cast<ResetMode>(reset);
    data.spec.doeMu = static_cast<DoeMuConvention>(doeMu);
    data.spec.grid = makeScaleGrid(level1, c, K);
    data.spec.dt = dt;
    data.spec.cascadeOrder = cascadeOrder;
    data.spec.theta = theta;
    data.spec.channelNorms.resize(K);
    for (std::uint32_t k = 0; k < K; ++k) data.spec.channelNorms[k] = get<double>(buf, off, path);
    data.sampleCount = sampleCount;
    const auto eventCount = get<std::uint64_t>(buf, off, path);
    if (buf.size() - off != eventCount * 11)
        throw Error(errcode::kFormat, path + ": event body size does not match event count");
    data.trains.resize(K + 1);
    for (std::uint32_t ch = 0; ch <= K; ++ch) {
        data.trains[ch].channel = ch;
        data.trains[ch].theta = theta;
        data.trains[ch].dt = dt;
    }
    std::pair<std::uint16_t, std::uint64_t> prevKey{0, 0};
    bool first = true;
    for (std::uint64_t i = 0; i < eventCount; ++i) {
        const auto ch = get<std::uint16_t>(buf, off, path);
        const auto pol = get<std::int8_t>(buf, off, path);
        const auto timeIndex = get<std::uint64_t>(buf, off, path);
        if (ch > K) throw Error(errcode::kFormat, path + ": event channel out of range");
        if (pol != 1 && pol != -1)
            throw Error(errcode::kFormat, path + ": event polarity must be +1 or -1");
        if (timeIndex >= sampleCount)
            throw Error(errcode::kFormat, path + ": event time index out of range");
        const std::pair<std::uint16_t, std::uint64_t> key{ch, timeIndex};
        if (!first && key < prevKey)
            throw Error(errcode::kFormat, path + ": events not sorted by (channel, time)");
        prevKey = key;
        first = false;
        data.trains[ch].events.push_back({timeIndex, pol});
    }
    return data;
}

} // namespace spikelet
