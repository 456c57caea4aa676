@Test
public void testTags() {
    Set<String> s = new LinkedHashSet<>(input);
}