package java.util;

public class HashMap<K, V> implements Cloneable, java.io.Serializable {
    private int count;

    public int size() {
        return count;
    }

    public V put(K key, V value) {
        return value;
    }

    public V get(Object key) {
        return null;
    }
}
