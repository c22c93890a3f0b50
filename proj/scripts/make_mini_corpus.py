#!/usr/bin/env python3
"""Regenerates the bundled mini corpus (data/mini/).

The corpus is hand-written: 40 labeled test methods across four synthetic
projects, plus a flaky-only validation corpus spanning two of those projects
and two unseen ones. Bodies are plain Java-ish text; labels are fixed.
"""
import csv
import os

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data", "mini")

FLAKY = [
    ("oozie-core", "org.oozie.CoordJobTest.testStatusAfterRestart", """\
CoordinatorJob job = services.get(CoordJobService.class).getJob(id);
waitFor(30 * 1000, new Predicate() {
    public boolean evaluate() throws Exception {
        return job.getStatus() == Job.Status.RUNNING;
    }
});
assertEquals(Job.Status.RUNNING, job.getStatus());"""),
    ("oozie-core", "org.oozie.CoordJobTest.testMaterializeWindow", """\
CoordinatorJob job = addRecordToCoordJobTable(CoordinatorJob.Status.PREP, start, end);
coordServices.getCoordinator().materialize(job.getId());
Thread.sleep(2000);
JPAService jpa = services.get(JPAService.class);
CoordJobGetJPAExecutor coordGetCmd = new CoordJobGetJPAExecutor(job.getId());
job = jpa.execute(coordGetCmd);
assertEquals(CoordinatorJob.Status.RUNNING, job.getStatus());"""),
    ("oozie-core", "org.oozie.WorkflowJobTest.testSuspendResume", """\
WorkflowJob job = startWorkflow("wf-fork.xml");
services.get(WorkflowService.class).suspend(job.getId());
waitFor(10 * 1000, () -> getRecord(job.getId()).getStatus() == WorkflowJob.Status.SUSPENDED);
wfClient.resume(job.getId());
assertEquals(WorkflowJob.Status.RUNNING, wfClient.getJobInfo(job.getId()).getStatus());"""),
    ("oozie-core", "org.oozie.WorkflowActionTest.testActionRetry", """\
WorkflowJob job = startWorkflow("wf-retry.xml");
WorkflowAction action = job.getActions().get(0);
waitFor(60 * 1000, () -> jpaService.execute(new WorkflowActionGetJPAExecutor(action.getId()))
        .getStatus() == WorkflowAction.Status.DONE);
action = jpaService.execute(new WorkflowActionGetJPAExecutor(action.getId()));
assertEquals(2, action.getRetries());"""),
    ("oozie-core", "org.oozie.CoordActionTest.testLastOnlyMaterialization", """\
CoordinatorJob job = addRecordToCoordJobTable(CoordinatorJob.Status.RUNNING, start, end);
CoordinatorAction action = addRecordToCoordActionTable(job.getId(), 1,
        CoordinatorAction.Status.WAITING, "coord-action-get.xml");
new CoordMaterializeTransitionXCommand(job.getId(), 3600).call();
action = getCoordAction(job.getId() + "@1");
assertEquals(CoordinatorAction.Status.READY, action.getStatus());"""),
    ("oozie-core", "org.oozie.JPAServiceTest.testPurgeOldRecords", """\
JPAService jpa = services.get(JPAService.class);
WorkflowJob job = addRecordToWfJobTable(WorkflowJob.Status.SUCCEEDED, endTime);
new PurgeXCommand(1, 1, 100).call();
Thread.sleep(500);
assertNull(jpa.execute(new WorkflowJobGetJPAExecutor(job.getId())));"""),
    ("oozie-core", "org.oozie.CoordJobTest.testDoneMaterializationTimeout", """\
CoordinatorJob job = addRecordToCoordJobTable(CoordinatorJob.Status.RUNNING, start, end);
sleep(materializationWindow * 2);
CoordJobGetJPAExecutor coordGetCmd = new CoordJobGetJPAExecutor(job.getId());
job = jpaService.execute(coordGetCmd);
assertTrue(job.isDoneMaterialization());"""),
    ("oozie-core", "org.oozie.ServicesTest.testServicesRestartKeepsTable", """\
services.destroy();
services = new Services();
services.init();
JPAService jpa = services.get(JPAService.class);
WorkflowJob job = jpa.execute(new WorkflowJobGetJPAExecutor(jobId));
assertNotNull(job);
assertEquals(recordCountBeforeRestart, jpa.execute(new WorkflowJobsCountJPAExecutor()));"""),
    ("oozie-core", "org.oozie.XmlConfigTest.testReloadCoordXml", """\
String xml = IOUtils.getResourceAsString("coord-job-get.xml", -1);
Configuration conf = new XConfiguration(new StringReader(xml));
CoordinatorJob job = createCoordJob(conf);
Thread.sleep(1000);
assertEquals("coord-job", job.getAppName());
assertNotNull(job.getXml());"""),
    ("oozie-core", "org.oozie.SLAServiceTest.testEventQueueDrains", """\
SLAService sla = services.get(SLAService.class);
sla.addRegistrationEvent(makeEvent(job.getId()));
waitFor(20 * 1000, () -> sla.getEventQueue().isEmpty());
assertTrue(sla.getEventQueue().isEmpty());
assertEquals(1, sla.getSLACalculator().size());"""),
    ("oozie-core", "org.oozie.RecoveryServiceTest.testRecoverSuspendedJob", """\
WorkflowJob job = addRecordToWfJobTable(WorkflowJob.Status.SUSPENDED, now);
new RecoveryXCommand(60).call();
sleep(3000);
job = jpaService.execute(new WorkflowJobGetJPAExecutor(job.getId()));
assertEquals(WorkflowJob.Status.RUNNING, job.getStatus());"""),
    ("oozie-core", "org.oozie.PartitionTest.testHcatPartitionNotification", """\
CoordinatorJob job = addRecordToCoordJobTableForWaiting("coord-job-for-hcat.xml");
addPartition(db, table, "dt=2012;country=us");
waitFor(30 * 1000, () -> getStatus(job.getId() + "@1") == CoordinatorAction.Status.READY);
assertEquals(CoordinatorAction.Status.READY, getStatus(job.getId() + "@1"));"""),
    ("jobqueue", "io.jobqueue.QueueTest.testTakeBlocksUntilJobReady", """\
Job job = new Job("render", payload);
queue.submit(job, 50, TimeUnit.MILLISECONDS);
Job taken = queue.take(200, TimeUnit.MILLISECONDS);
assertNotNull(taken);
assertEquals(job.getId(), taken.getId());"""),
    ("jobqueue", "io.jobqueue.QueueTest.testConcurrentSubmitters", """\
ExecutorService pool = Executors.newFixedThreadPool(8);
for (int i = 0; i < 8; i++) {
    pool.submit(() -> queue.submit(new Job("batch", payload)));
}
pool.shutdown();
pool.awaitTermination(2, TimeUnit.SECONDS);
assertEquals(8, queue.size());"""),
    ("jobqueue", "io.jobqueue.RetryTest.testJobRetryBackoff", """\
Job job = queue.submit(new Job("flappy", payload));
failNext(2);
Thread.sleep(250);
JobRecord record = store.getRecord(job.getId());
assertEquals(JobState.SUCCEEDED, record.getState());
assertEquals(2, record.getAttempts());"""),
    ("jobqueue", "io.jobqueue.SchedulerTest.testCronFiresOnSchedule", """\
CountingJob job = new CountingJob();
scheduler.schedule("*/1 * * * * *", job);
Thread.sleep(2100);
int observed = job.runCount();
assertTrue("expected at least 2 firings, saw " + observed, observed >= 2);"""),
    ("jobqueue", "io.jobqueue.LeaseTest.testLeaseExpiresWhileWorkerStalls", """\
Job job = queue.submit(new Job("lease", payload));
Worker worker = cluster.takeWorker();
worker.stall(leaseMillis * 2);
Job handedOver = queue.take(500, TimeUnit.MILLISECONDS);
assertEquals(job.getId(), handedOver.getId());"""),
    ("jobqueue", "io.jobqueue.MetricsTest.testGaugeSeesRunningJob", """\
Job job = queue.submit(new Job("gauge", payload));
workers.start(1);
waitUntil(() -> metrics.gauge("jobs.running") == 1, 1000);
assertEquals(1, metrics.gauge("jobs.running"));
workers.drain();"""),
    ("jobqueue", "io.jobqueue.StoreTest.testTableCompactionKeepsLiveRows", """\
for (int i = 0; i < 100; i++) {
    store.insert(new JobRecord("job-" + i));
}
store.deleteWhere(record -> record.getId().endsWith("7"));
store.compactTable();
assertEquals(90, store.tableSize());"""),
    ("jobqueue", "io.jobqueue.ShutdownTest.testDrainOnShutdown", """\
queue.submit(new Job("last", payload));
workers.start(2);
queue.shutdown();
boolean drained = queue.awaitDrained(500, TimeUnit.MILLISECONDS);
assertTrue(drained);"""),
]

NON_FLAKY = [
    ("cachekit", "io.cachekit.LruTest.testEvictsLeastRecentlyUsed", """\
LruCache<String, Integer> cache = new LruCache<>(2);
cache.put("a", 1);
cache.put("b", 2);
cache.get("a");
cache.put("c", 3);
assertFalse(cache.contains("b"));
assertTrue(cache.contains("a"));"""),
    ("cachekit", "io.cachekit.LruTest.testCapacityOne", """\
LruCache<String, Integer> cache = new LruCache<>(1);
cache.put("x", 7);
cache.put("y", 8);
assertEquals(Integer.valueOf(8), cache.get("y"));
assertNull(cache.get("x"));"""),
    ("cachekit", "io.cachekit.SerializerTest.testRoundTripStruct", """\
Payload in = new Payload("name", 42, true);
byte[] bytes = serializer.encode(in);
Payload out = serializer.decode(bytes);
assertEquals(in.text(), out.text());
assertEquals(in.number(), out.number());"""),
    ("cachekit", "io.cachekit.KeyTest.testCompositeKeyEquality", """\
CompositeKey k1 = CompositeKey.of("user", 11);
CompositeKey k2 = CompositeKey.of("user", 11);
assertEquals(k1, k2);
assertEquals(k1.hashCode(), k2.hashCode());"""),
    ("cachekit", "io.cachekit.StatsTest.testHitRatioMath", """\
CacheStats stats = new CacheStats(75, 25);
assertEquals(0.75, stats.hitRatio(), 1e-9);
assertEquals(100, stats.lookups());"""),
    ("cachekit", "io.cachekit.CodecTest.testVarintBoundaries", """\
assertArrayEquals(new byte[]{0x00}, Varint.encode(0));
assertArrayEquals(new byte[]{0x7f}, Varint.encode(127));
assertEquals(128, Varint.decode(Varint.encode(128)));
assertEquals(Long.MAX_VALUE, Varint.decode(Varint.encode(Long.MAX_VALUE)));"""),
    ("cachekit", "io.cachekit.HeaderTest.testParseCacheControl", """\
CacheControl cc = CacheControl.parse("max-age=60, no-transform");
assertEquals(60, cc.maxAgeSeconds());
assertTrue(cc.noTransform());
assertFalse(cc.noStore());"""),
    ("cachekit", "io.cachekit.BloomTest.testNoFalseNegatives", """\
BloomFilter filter = new BloomFilter(1024, 3);
for (String key : KEYS) {
    filter.add(key);
}
for (String key : KEYS) {
    assertTrue(filter.mightContain(key));
}"""),
    ("cachekit", "io.cachekit.WeigherTest.testWeightedEviction", """\
WeightedCache cache = new WeightedCache(10);
cache.put("small", value(2));
cache.put("large", value(9));
assertFalse(cache.contains("small"));
assertTrue(cache.contains("large"));"""),
    ("cachekit", "io.cachekit.TtlMathTest.testExpiryArithmetic", """\
Expiry expiry = Expiry.ofMillis(1500);
assertEquals(1500, expiry.remaining(0));
assertEquals(500, expiry.remaining(1000));
assertEquals(0, expiry.remaining(2000));"""),
    ("geoutil", "dev.geoutil.DistanceTest.testHaversineKnownPair", """\
double km = Geo.haversineKm(52.2296756, 21.0122287, 41.8919300, 12.5113300);
assertEquals(1315.5, km, 0.5);"""),
    ("geoutil", "dev.geoutil.DistanceTest.testZeroDistance", """\
double km = Geo.haversineKm(10.0, 20.0, 10.0, 20.0);
assertEquals(0.0, km, 1e-12);"""),
    ("geoutil", "dev.geoutil.BoundsTest.testExpandContains", """\
Bounds bounds = Bounds.of(0, 0, 1, 1);
Bounds expanded = bounds.expand(0.5);
assertTrue(expanded.contains(1.4, 1.4));
assertFalse(expanded.contains(1.6, 1.6));"""),
    ("geoutil", "dev.geoutil.PolylineTest.testEncodeDecodeRoundTrip", """\
List<LatLng> points = Arrays.asList(new LatLng(38.5, -120.2), new LatLng(40.7, -120.95));
String encoded = Polyline.encode(points);
List<LatLng> decoded = Polyline.decode(encoded);
assertEquals(points.size(), decoded.size());
assertEquals(points.get(0).lat(), decoded.get(0).lat(), 1e-5);"""),
    ("geoutil", "dev.geoutil.ProjectionTest.testMercatorInverse", """\
Point projected = Mercator.project(48.8566, 2.3522);
LatLng back = Mercator.unproject(projected.x(), projected.y());
assertEquals(48.8566, back.lat(), 1e-9);
assertEquals(2.3522, back.lng(), 1e-9);"""),
    ("geoutil", "dev.geoutil.BearingTest.testCardinalBearings", """\
assertEquals(0.0, Geo.initialBearing(0, 0, 1, 0), 1e-9);
assertEquals(90.0, Geo.initialBearing(0, 0, 0, 1), 1e-9);
assertEquals(180.0, Geo.initialBearing(1, 0, 0, 0), 1e-9);"""),
    ("geoutil", "dev.geoutil.AreaTest.testTriangleArea", """\
Polygon triangle = Polygon.of(p(0, 0), p(0, 3), p(4, 0));
assertEquals(6.0, Planar.area(triangle), 1e-9);"""),
    ("geoutil", "dev.geoutil.GridTest.testCellIndexStable", """\
GridIndex grid = new GridIndex(0.25);
long cell = grid.cellOf(12.3456, -7.8901);
assertEquals(cell, grid.cellOf(12.3456, -7.8901));
assertNotEquals(cell, grid.cellOf(12.3456, -7.3901));"""),
    ("geoutil", "dev.geoutil.WktTest.testParsePoint", """\
Geometry g = Wkt.parse("POINT (30 10)");
assertEquals(GeometryType.POINT, g.type());
assertEquals(30.0, g.firstCoordinate().x(), 1e-12);"""),
    ("geoutil", "dev.geoutil.SimplifyTest.testDouglasPeuckerCollinear", """\
List<Point> line = Arrays.asList(p(0, 0), p(1, 1), p(2, 2), p(3, 3));
List<Point> simplified = Simplify.douglasPeucker(line, 0.01);
assertEquals(2, simplified.size());"""),
]

# Flaky-only validation corpus. The first row duplicates a qualified name
# from the training corpus on purpose (it must be dropped by the filter).
VALIDATION = [
    ("oozie-core", "org.oozie.CoordJobTest.testStatusAfterRestart", """\
CoordinatorJob job = services.get(CoordJobService.class).getJob(id);
waitFor(30 * 1000, () -> job.getStatus() == Job.Status.RUNNING);
assertEquals(Job.Status.RUNNING, job.getStatus());"""),
    ("oozie-core", "org.oozie.BundleJobTest.testBundleKickoff", """\
BundleJob job = addRecordToBundleJobTable(Job.Status.PREP);
new BundleStartXCommand(job.getId()).call();
waitFor(20 * 1000, () -> getBundleJob(job.getId()).getStatus() == Job.Status.RUNNING);
assertEquals(Job.Status.RUNNING, getBundleJob(job.getId()).getStatus());"""),
    ("oozie-core", "org.oozie.CoordRerunTest.testRerunRefreshesRecord", """\
CoordinatorJob job = addRecordToCoordJobTable(CoordinatorJob.Status.SUCCEEDED, start, end);
new CoordRerunXCommand(job.getId(), "action", "1", false, true).call();
Thread.sleep(1500);
assertEquals(CoordinatorAction.Status.WAITING, getStatus(job.getId() + "@1"));"""),
    ("oozie-core", "org.oozie.QueueDumpTest.testQueueDumpAfterBurst", """\
for (int i = 0; i < 50; i++) {
    callableQueueService.queue(new SleepJobCommand(job.getId(), 10));
}
Thread.sleep(800);
assertTrue(callableQueueService.queueDump().size() < 50);"""),
    ("jobqueue", "io.jobqueue.PriorityTest.testStarvationUnderLoad", """\
queue.submit(new Job("low", payload).priority(1));
for (int i = 0; i < 20; i++) {
    queue.submit(new Job("high-" + i, payload).priority(9));
}
workers.start(4);
assertTrue(queue.awaitEmpty(2, TimeUnit.SECONDS));"""),
    ("jobqueue", "io.jobqueue.HeartbeatTest.testWorkerHeartbeatJitter", """\
Worker worker = cluster.takeWorker();
worker.setHeartbeatJitter(50);
Thread.sleep(600);
JobRecord record = store.getRecord(worker.currentJob().getId());
assertEquals(JobState.RUNNING, record.getState());"""),
    ("streamproc", "net.streamproc.WindowTest.testLateEventLandsInPane", """\
stream.send(event("k", ts(100)));
stream.send(event("k", ts(95)));
stream.advanceWatermarkTo(ts(200));
await().atMost(2, SECONDS).until(() -> sink.panes().size() == 1);
assertEquals(2, sink.panes().get(0).count());"""),
    ("streamproc", "net.streamproc.BackpressureTest.testSlowConsumerSignals", """\
Publisher publisher = broker.publisher("topic");
Consumer consumer = broker.consumer("topic", rate(10));
publisher.burst(1000);
Thread.sleep(400);
assertTrue(publisher.isThrottled());"""),
    ("streamproc", "net.streamproc.CheckpointTest.testRestoreAfterCrash", """\
pipeline.start();
pipeline.injectFault("stage-2");
await().atMost(5, SECONDS).until(() -> pipeline.state() == State.RUNNING);
assertEquals(checkpointOffset, pipeline.restoredOffset());"""),
    ("streamproc", "net.streamproc.TimerTest.testEventTimeTimerFires", """\
timers.registerEventTimeTimer("k", ts(500));
stream.advanceWatermarkTo(ts(501));
Thread.sleep(150);
assertEquals(1, firedTimers.count("k"));"""),
    ("imgcodec", "org.imgcodec.DecodeTest.testProgressiveJpegUnderMemoryPressure", """\
byte[] bytes = readResource("progressive.jpg");
System.gc();
Image image = decoder.decode(bytes, Budget.ofMegabytes(2));
assertNotNull(image);
assertEquals(640, image.width());"""),
    ("imgcodec", "org.imgcodec.EncodeTest.testParallelEncodeStable", """\
ExecutorService pool = Executors.newFixedThreadPool(4);
List<Future<byte[]>> results = pool.invokeAll(encodeTasks(8));
for (Future<byte[]> f : results) {
    assertTrue(f.get(1, TimeUnit.SECONDS).length > 0);
}"""),
    ("jobqueue", "io.jobqueue.PauseTest.testPauseResumeKeepsOrder", """\
Job job = queue.submit(new Job("ordered", payload));
queue.pause();
queue.submit(new Job("second", payload));
queue.resume();
Thread.sleep(120);
assertEquals(job.getId(), sink.first().getId());"""),
]


def write(path, rows, labels):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["project", "qualified_name", "label", "body"])
        for (project, name, body), label in zip(rows, labels):
            w.writerow([project, name, label, body])


def main():
    cases = FLAKY + NON_FLAKY
    labels = ["flaky"] * len(FLAKY) + ["non-flaky"] * len(NON_FLAKY)
    write(os.path.join(OUT, "corpus.csv"), cases, labels)
    write(os.path.join(OUT, "validation_flaky.csv"), VALIDATION,
          ["flaky"] * len(VALIDATION))
    print(f"wrote {len(cases)} labeled cases and {len(VALIDATION)} validation cases")


if __name__ == "__main__":
    main()
