#include <cstring>
#include <fstream>
#include <zlib.h>

#include "xreg/log.hpp"
#include "xreg/model.hpp"

// Little-endian binary container:
//   magic[8] | header | tree blocks | optional tail block | crc32(u32)
// The CRC covers everything before the trailer; any truncation or corruption
// fails the load with no partial model returned.

namespace xreg {

namespace {

class Writer {
public:
    template <typename T>
    void pod(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        const char* p = reinterpret_cast<const char*>(&v);
        buf_.insert(buf_.end(), p, p + sizeof(T));
    }
    void u8(std::uint8_t v) { pod(v); }
    void u32(std::uint32_t v) { pod(v); }
    void u64(std::uint64_t v) { pod(v); }
    void i32(std::int32_t v) { pod(v); }
    void f64(double v) { pod(v); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void sparse(const SparseVector& v) {
        u32(v.dim);
        u32(static_cast<std::uint32_t>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            u32(v.indices[i]);
            f64(v.values[i]);
        }
    }
    void regressor(const LinearRegressor& r) {
        sparse(r.w);
        i32(r.epochs);
        f64(r.gap);
        u8(r.empty ? 1 : 0);
    }
    const std::vector<char>& bytes() const { return buf_; }

private:
    std::vector<char> buf_;
};

class Reader {
public:
    Reader(const char* data, std::size_t size, std::string path)
        : data_(data), size_(size), path_(std::move(path)) {}

    template <typename T>
    T pod() {
        static_assert(std::is_trivially_copyable_v<T>);
        if (pos_ + sizeof(T) > size_) fail("truncated");
        T v;
        std::memcpy(&v, data_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::uint8_t u8() { return pod<std::uint8_t>(); }
    std::uint32_t u32() { return pod<std::uint32_t>(); }
    std::uint64_t u64() { return pod<std::uint64_t>(); }
    std::int32_t i32() { return pod<std::int32_t>(); }
    double f64() { return pod<double>(); }
    std::string str() {
        std::uint32_t n = u32();
        if (pos_ + n > size_) fail("truncated string");
        std::string s(data_ + pos_, n);
        pos_ += n;
        return s;
    }
    SparseVector sparse() {
        SparseVector v;
        v.dim = u32();
        std::uint32_t n = u32();
        v.indices.reserve(n);
        v.values.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            v.indices.push_back(u32());
            v.values.push_back(f64());
        }
        return v;
    }
    LinearRegressor regressor() {
        LinearRegressor r;
        r.w = sparse();
        r.epochs = i32();
        r.gap = f64();
        r.empty = u8() != 0;
        return r;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw DataError("model load failed (" + path_ + "): " + why);
    }
    std::size_t pos() const { return pos_; }

private:
    const char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::string path_;
};

} // namespace

void save_model(const XRegModel& m, const std::string& path) {
    Writer w;
    const char* magic = model_format_magic();
    for (int i = 0; i < 8; ++i) w.u8(static_cast<std::uint8_t>(magic[i]));
    w.u32(1); // format version
    w.u32(m.num_features);
    w.u32(m.num_labels);
    w.f64(m.y_max);
    w.i32(m.hp.trees);
    w.u32(m.hp.max_leaf);
    w.f64(m.hp.C);
    w.f64(m.hp.tol);
    w.i32(m.hp.max_epochs);
    w.f64(m.hp.prune);
    w.u64(m.hp.seed);
    w.str(model_rng_name());

    w.u32(static_cast<std::uint32_t>(m.trees.size()));
    for (const TreeModel& t : m.trees) {
        w.u32(static_cast<std::uint32_t>(t.topo.nodes.size()));
        for (std::size_t n = 0; n < t.topo.nodes.size(); ++n) {
            const TreeNode& node = t.topo.nodes[n];
            w.i32(node.parent);
            w.i32(node.children[0]);
            w.i32(node.children[1]);
            w.i32(node.depth);
            w.f64(t.frac[n]);
            if (node.is_leaf()) {
                w.u32(static_cast<std::uint32_t>(node.labels.size()));
                for (index_t l : node.labels) w.u32(l);
                for (const LinearRegressor& r : t.label_reg[n]) w.regressor(r);
            } else {
                w.regressor(t.child_reg[n][0]);
                w.regressor(t.child_reg[n][1]);
            }
        }
    }

    w.u8(m.has_tail ? 1 : 0);
    if (m.has_tail) {
        w.u32(static_cast<std::uint32_t>(m.tail.centroids.size()));
        for (std::size_t l = 0; l < m.tail.centroids.size(); ++l) {
            w.u32(m.tail.counts[l]);
            w.sparse(m.tail.centroids[l]);
        }
    }

    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(w.bytes().data()),
              static_cast<uInt>(w.bytes().size())));

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    out.write(reinterpret_cast<const char*>(&crc), sizeof(crc));
    if (!out) throw DataError("write failed: " + path);
}

XRegModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (bytes.size() < 12) throw DataError("model load failed (" + path + "): truncated");
    if (std::memcmp(bytes.data(), model_format_magic(), 8) != 0)
        throw DataError("model load failed (" + path + "): bad magic bytes");

    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, bytes.data() + bytes.size() - 4, 4);
    std::uint32_t actual_crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size() - 4)));
    if (stored_crc != actual_crc)
        throw DataError("model load failed (" + path + "): checksum mismatch");

    Reader r(bytes.data() + 8, bytes.size() - 12, path);
    std::uint32_t version = r.u32();
    if (version != 1)
        throw DataError("model load failed (" + path + "): unsupported format version " +
                        std::to_string(version));

    XRegModel m;
    m.num_features = r.u32();
    m.num_labels = r.u32();
    m.y_max = r.f64();
    m.hp.trees = r.i32();
    m.hp.max_leaf = r.u32();
    m.hp.C = r.f64();
    m.hp.tol = r.f64();
    m.hp.max_epochs = r.i32();
    m.hp.prune = r.f64();
    m.hp.seed = r.u64();
    std::string rng = r.str();
    if (rng != model_rng_name())
        log_info("model rng=" + rng + " differs from current " + model_rng_name());

    std::uint32_t num_trees = r.u32();
    m.trees.resize(num_trees);
    for (TreeModel& t : m.trees) {
        std::uint32_t num_nodes = r.u32();
        t.topo.nodes.resize(num_nodes);
        t.frac.resize(num_nodes);
        t.child_reg.resize(num_nodes);
        t.label_reg.resize(num_nodes);
        for (std::uint32_t n = 0; n < num_nodes; ++n) {
            TreeNode& node = t.topo.nodes[n];
            node.parent = r.i32();
            node.children[0] = r.i32();
            node.children[1] = r.i32();
            node.depth = r.i32();
            t.frac[n] = r.f64();
            if (node.children[0] < 0) {
                std::uint32_t nlabels = r.u32();
                node.labels.resize(nlabels);
                for (std::uint32_t j = 0; j < nlabels; ++j) node.labels[j] = r.u32();
                t.label_reg[n].resize(nlabels);
                for (std::uint32_t j = 0; j < nlabels; ++j) t.label_reg[n][j] = r.regressor();
            } else {
                t.child_reg[n][0] = r.regressor();
                t.child_reg[n][1] = r.regressor();
            }
        }
    }

    m.has_tail = r.u8() != 0;
    if (m.has_tail) {
        std::uint32_t L = r.u32();
        m.tail.centroids.resize(L);
        m.tail.counts.resize(L);
        for (std::uint32_t l = 0; l < L; ++l) {
            m.tail.counts[l] = r.u32();
            m.tail.centroids[l] = r.sparse();
        }
    }
    return m;
}

} // namespace xreg
