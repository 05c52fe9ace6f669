#include <benchmark/benchmark.h>

#include "hammersim/controller.hpp"
#include "hammersim/ecc.hpp"
#include "hammersim/workloads.hpp"

using namespace hammersim;

namespace {

DramDevice make_device(double vulnerable_fraction) {
    Geometry geom{.banks = 1, .rows_per_bank = 64, .bits_per_row = 1024, .spare_rows_per_bank = 0};
    FaultModelParams fault;
    fault.vulnerable_fraction = vulnerable_fraction;
    return DramDevice(geom, TimingParams{}, fault, 42);
}

void BM_HammerReplay(benchmark::State& state) {
    DramDevice device = make_device(0.0);
    AccessTrace trace =
        gen_single_sided(device.geometry(), {0, 5}, uint64_t(state.range(0)));
    for (auto _ : state) {
        DramDevice dev = device;
        Controller ctrl(dev, MitigationConfig{}, 1);
        ctrl.replay(trace.commands);
        benchmark::DoNotOptimize(ctrl.counters().acts);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 3);
}
BENCHMARK(BM_HammerReplay)->Arg(1000)->Arg(10000);

void BM_HammerReplayPara(benchmark::State& state) {
    DramDevice device = make_device(0.0);
    AccessTrace trace = gen_single_sided(device.geometry(), {0, 5}, 10000);
    MitigationConfig mit;
    mit.para = true;
    mit.para_p = 0.001;
    for (auto _ : state) {
        DramDevice dev = device;
        Controller ctrl(dev, mit, 1);
        ctrl.replay(trace.commands);
        benchmark::DoNotOptimize(ctrl.counters().mitigation_refreshes);
    }
    state.SetItemsProcessed(state.iterations() * 30000);
}
BENCHMARK(BM_HammerReplayPara);

void BM_EccEncode(benchmark::State& state) {
    uint64_t x = 0x0123456789abcdefull;
    for (auto _ : state) {
        x = x * 6364136223846793005ull + 1;
        benchmark::DoNotOptimize(ecc::encode(x));
    }
}
BENCHMARK(BM_EccEncode);

void BM_EccDecodeSingleError(benchmark::State& state) {
    uint64_t x = 0x0123456789abcdefull;
    uint32_t pos = 0;
    for (auto _ : state) {
        x = x * 6364136223846793005ull + 1;
        ecc::Codeword72 cw = ecc::flip_bit(ecc::encode(x), pos);
        pos = (pos + 1) % 72;
        benchmark::DoNotOptimize(ecc::decode(cw));
    }
}
BENCHMARK(BM_EccDecodeSingleError);

} // namespace

BENCHMARK_MAIN();
