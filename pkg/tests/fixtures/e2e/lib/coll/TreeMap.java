package coll;

public class TreeMap {
    public Object put(Object k, Object v) { return null; }
    public Object get(Object k) { return null; }
    public Object firstKey() { return null; }
}
