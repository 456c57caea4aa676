@Test
public void testTags() {
    Set<String> s = new HashSet<>(input);
}