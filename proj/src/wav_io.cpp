#include "spikelet/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "spikelet/errors.hpp"

namespace spikelet {

namespace {

template <typename T>
T readLe(const std::vector<unsigned char>& buf, std::size_t off, const std::string& path) {
    if (off + sizeof(T) > buf.size()) throw Error(errcode::kFormat, path + ": truncated WAV");
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    return v;
}

template <typename T>
void appendLe(std::vector<unsigned char>& buf, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    buf.insert(buf.end(), b, b + sizeof(T));
}

} // namespace

Signal readWavSignal(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errcode::kIo, "cannot open " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
        std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
        throw Error(errcode::kFormat, path + ": not a RIFF/WAVE file");
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::size_t dataOff = 0, dataLen = 0;
    bool haveFmt = false;
    std::size_t off = 12;
    while (off + 8 <= buf.size()) {
        char id[5] = {0};
        std::memcpy(id, buf.data() + off, 4);
        const auto len = readLe<std::uint32_t>(buf, off + 4, path);
        const std::size_t body = off + 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            format = readLe<std::uint16_t>(buf, body, path);
            channels = readLe<std::uint16_t>(buf, body + 2, path);
            rate = readLe<std::uint32_t>(buf, body + 4, path);
            bits = readLe<std::uint16_t>(buf, body + 14, path);
            haveFmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            dataOff = body;
            dataLen = len;
        }
        off = body + len + (len & 1u);
    }
    if (!haveFmt || dataOff == 0) throw Error(errcode::kFormat, path + ": missing fmt/data chunk");
    if (channels == 0 || rate == 0) throw Error(errcode::kFormat, path + ": bad fmt chunk");
    if (dataOff + dataLen > buf.size())
        throw Error(errcode::kFormat, path + ": data chunk exceeds file size");
    Signal s;
    s.dt = 1.0 / static_cast<double>(rate);
    const std::size_t bytesPer = bits / 8u;
    if (bytesPer == 0) throw Error(errcode::kFormat, path + ": bad bit depth");
    const std::size_t frames = dataLen / (bytesPer * channels);
    s.samples.resize(frames);
    if (format == 1 && bits == 16) {
        for (std::size_t f = 0; f < frames; ++f) {
            double acc = 0.0;
            for (std::size_t ch = 0; ch < channels; ++ch) {
                const auto v =
                    readLe<std::int16_t>(buf, dataOff + (f * channels + ch) * 2, path);
                acc += static_cast<double>(v) / 32768.0;
            }
            s.samples[f] = acc / channels;
        }
    } else if (format == 3 && bits == 32) {
        for (std::size_t f = 0; f < frames; ++f) {
            double acc = 0.0;
            for (std::size_t ch = 0; ch < channels; ++ch) {
                const auto v = readLe<float>(buf, dataOff + (f * channels + ch) * 4, path);
                acc += static_cast<double>(v);
            }
            s.samples[f] = acc / channels;
        }
    } else {
        throw Error(errcode::kFormat, path + ": unsupported WAV encoding (need PCM16 or float32)");
    }
    if (s.samples.empty()) throw Error(errcode::kFormat, path + ": no audio frames");
    return s;
}

void writeWavSignal(const std::string& path, const Signal& s) {
    if (!(s.dt > 0.0)) throw Error(errcode::kRange, "wav: signal dt must be positive");
    const auto rate = static_cast<std::uint32_t>(std::lround(1.0 / s.dt));
    if (rate == 0) throw Error(errcode::kRange, "wav: sample rate rounds to zero");
    std::vector<unsigned char> buf;
    const auto dataLen = static_cast<std::uint32_t>(s.samples.size() * 2);
    buf.insert(buf.end(), {'R', 'I', 'F', 'F'});
    appendLe<std::uint32_t>(buf, 36 + dataLen);
    buf.insert(buf.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    appendLe<std::uint32_t>(buf, 16);
    appendLe<std::uint16_t>(buf, 1);
    appendLe<std::uint16_t>(buf, 1);
    appendLe<std::uint32_t>(buf, rate);
    appendLe<std::uint32_t>(buf, rate * 2);
    appendLe<std::uint16_t>(buf, 2);
    appendLe<std::uint16_t>(buf, 16);
    buf.insert(buf.end(), {'d', 'a', 't', 'a'});
    appendLe<std::uint32_t>(buf, dataLen);
    for (double v : s.samples) {
        const double clipped = std::clamp(v, -1.0, 32767.0 / 32768.0);
        appendLe<std::int16_t>(buf, static_cast<std::int16_t>(std::lround(clipped * 32768.0)));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errcode::kIo, "cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(errcode::kIo, "write failed on " + path);
}

} // namespace spikelet
