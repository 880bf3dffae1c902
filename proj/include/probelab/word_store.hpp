#pragma once
#include <cstdint>
#include <vector>

namespace probelab {

// Word-addressed memory. The index structures funnel every access through
// this interface so a simulator can trace or count individual probes.
class WordStore {
public:
    virtual ~WordStore() = default;
    virtual uint64_t read(uint64_t addr) = 0;
    virtual void write(uint64_t addr, uint64_t value) = 0;
};

// Open-addressing hash map from address to word. Absent addresses read 0 and
// there is no deletion, which is all a sparse Fenwick tree needs.
class FlatStore : public WordStore {
public:
    explicit FlatStore(size_t capacity_hint = 64) {
        size_t cap = 64;
        while (cap < capacity_hint * 2) cap <<= 1;
        keys_.assign(cap, 0);
        vals_.assign(cap, 0);
        occ_.assign(cap, 0);
    }

    uint64_t read(uint64_t addr) override {
        probes_++;
        size_t i = slot(addr);
        return occ_[i] ? vals_[i] : 0;
    }

    void write(uint64_t addr, uint64_t value) override {
        probes_++;
        size_t i = slot(addr);
        if (!occ_[i]) {
            occ_[i] = 1;
            keys_[i] = addr;
            used_++;
            if (used_ * 2 > occ_.size()) {
                grow();
                i = slot(addr);
            }
        }
        vals_[i] = value;
    }

    int64_t probes() const { return probes_; }
    size_t entries() const { return used_; }

private:
    static uint64_t hash(uint64_t x) {
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        x *= 0xc4ceb9fe1a85ec53ULL;
        x ^= x >> 33;
        return x;
    }
    size_t slot(uint64_t addr) const {
        size_t mask = occ_.size() - 1;
        size_t i = size_t(hash(addr)) & mask;
        while (occ_[i] && keys_[i] != addr) i = (i + 1) & mask;
        return i;
    }
    void grow() {
        std::vector<uint64_t> ok = std::move(keys_), ov = std::move(vals_);
        std::vector<uint8_t> oo = std::move(occ_);
        keys_.assign(oo.size() * 2, 0);
        vals_.assign(oo.size() * 2, 0);
        occ_.assign(oo.size() * 2, 0);
        for (size_t i = 0; i < oo.size(); i++) {
            if (!oo[i]) continue;
            size_t s = slot(ok[i]);
            occ_[s] = 1;
            keys_[s] = ok[i];
            vals_[s] = ov[i];
        }
    }

    std::vector<uint64_t> keys_, vals_;
    std::vector<uint8_t> occ_;
    size_t used_ = 0;
    int64_t probes_ = 0;
};

} // namespace probelab
