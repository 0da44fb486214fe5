#include "mtm/forecast/serialize.hpp"

#include "mtm/core/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace mtm::forecast {

namespace {

static_assert(std::endian::native == std::endian::little, "model files assume a little-endian host");

constexpr char kMagic[4] = {'M', 'T', 'M', 'F'};

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

class Writer {
public:
    template <typename T>
    void put(T v) {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        bytes_.append(buf, sizeof(T));
    }
    void put_bytes(const std::string& s) { bytes_ += s; }
    const std::string& bytes() const { return bytes_; }

private:
    std::string bytes_;
};

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}
    template <typename T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::string get_bytes(std::size_t n) {
        need(n);
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw CorruptFileError("model file is truncated");
    }
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

} // namespace

void save_model(std::ostream& out, const ForecastModel& model) {
    const auto& c = model.config();
    const auto& t = model.train_config();
    Writer w;
    w.put_bytes(std::string(kMagic, 4));
    w.put<std::uint32_t>(kModelFormatVersion);
    w.put<std::uint64_t>(c.window);
    w.put<std::uint64_t>(c.hidden);
    w.put<std::uint64_t>(c.key_dim);
    w.put<std::uint64_t>(c.attention_levels);
    w.put<std::uint64_t>(c.kernels.size());
    for (auto k : c.kernels) w.put<std::uint64_t>(k);
    w.put<std::uint64_t>(c.attention_filter.size());
    w.put_bytes(c.attention_filter);
    w.put<std::uint64_t>(t.window);
    w.put<double>(t.learning_rate);
    w.put<std::uint64_t>(t.epochs);
    w.put<std::uint64_t>(t.batch_size);
    w.put<std::uint64_t>(t.seed);
    w.put<std::uint32_t>(t.optimizer == Optimizer::Momentum ? 1 : 0);
    w.put<double>(t.momentum);
    w.put<double>(t.clip_norm);
    w.put<std::uint64_t>(model.params().size());
    for (double v : model.params()) w.put<double>(v);
    const std::uint64_t sum = fnv1a(w.bytes());
    w.put<std::uint64_t>(sum);
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw Error("failed to write model");
}

void save_model(const std::filesystem::path& path, const ForecastModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot create model file " + path.string());
    save_model(out, model);
}

ForecastModel load_model(std::istream& in) {
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r(bytes);
    if (r.get_bytes(4) != std::string(kMagic, 4)) throw CorruptFileError("not a model file (bad magic)");
    const auto version = r.get<std::uint32_t>();
    if (version != kModelFormatVersion) {
        throw VersionError("model format version " + std::to_string(version) + " is not supported (expected " +
                           std::to_string(kModelFormatVersion) + ")");
    }
    constexpr std::uint64_t kSane = std::uint64_t{1} << 32;
    const auto checked = [&](std::uint64_t v) {
        if (v > kSane) throw CorruptFileError("implausible size field in model file");
        return static_cast<std::size_t>(v);
    };
    ModelConfig c;
    c.window = checked(r.get<std::uint64_t>());
    c.hidden = checked(r.get<std::uint64_t>());
    c.key_dim = checked(r.get<std::uint64_t>());
    c.attention_levels = checked(r.get<std::uint64_t>());
    c.kernels.resize(checked(r.get<std::uint64_t>()));
    for (auto& k : c.kernels) k = checked(r.get<std::uint64_t>());
    c.attention_filter = r.get_bytes(checked(r.get<std::uint64_t>()));
    TrainConfig t;
    t.window = checked(r.get<std::uint64_t>());
    t.learning_rate = r.get<double>();
    t.epochs = checked(r.get<std::uint64_t>());
    t.batch_size = checked(r.get<std::uint64_t>());
    t.seed = r.get<std::uint64_t>();
    t.optimizer = r.get<std::uint32_t>() == 1 ? Optimizer::Momentum : Optimizer::Sgd;
    t.momentum = r.get<double>();
    t.clip_norm = r.get<double>();
    std::vector<double> params(checked(r.get<std::uint64_t>()));
    for (double& v : params) v = r.get<double>();
    const std::size_t body = r.pos();
    const auto stored = r.get<std::uint64_t>();
    if (r.remaining() != 0) throw CorruptFileError("trailing bytes after model data");
    if (stored != fnv1a(bytes.substr(0, body))) throw CorruptFileError("model checksum mismatch");
    try {
        return ForecastModel(std::move(c), std::move(params), t);
    } catch (const CorruptFileError&) {
        throw;
    } catch (const Error& e) {
        throw CorruptFileError(std::string("model file is inconsistent: ") + e.what());
    }
}

ForecastModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open model file " + path.string());
    return load_model(in);
}

} // namespace mtm::forecast
