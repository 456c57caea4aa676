@Test
public void testCounts() {
    Map<String, Integer> m = new HashMap<>();
    m.put("b", 2);
    m.put("a", 1);
    assertEquals("{b=2, a=1}", m.toString());
}